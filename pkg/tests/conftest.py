import pytest

# The five-line ECLF sample used across the suite (robots.txt fetch by a
# crawler, a stylesheet, a page, two images).
SAMPLE_ECLF_LINES = [
    '72.30.252.91 - - [18/Jun/2006:12:28:33 +0000] "GET /robots.txt HTTP/1.0"'
    ' 200 52 "-" "Mozilla/5.0 (compatible; Yahoo! Slurp;'
    ' http://help.yahoo.com/help/us/ysearch/slurp)"',
    '83.77.134.184 - - [18/Jun/2006:12:29:40 +0000] "GET'
    ' /vanuatu/export/system/modules/VTO/resources/stylesheet/vto.css'
    ' HTTP/1.1" 200 7797 "-" "Mozilla/4.0 (compatible; MSIE 6.0; Windows NT'
    ' 5.1; SV1; .NET CLR 1.1.4322)"',
    '83.77.134.184 - - [18/Jun/2006:12:29:41 +0000] "GET'
    ' /vanuatu/export/sites/VTO/fr/kids/volcanoes/ambrym_eruption.html'
    ' HTTP/1.1" 200 26812 "-" "Mozilla/4.0 (compatible; MSIE 6.0; Windows NT'
    ' 5.1; SV1; .NET CLR 1.1.4322)"',
    '83.77.134.184 - - [18/Jun/2006:12:29:41 +0000] "GET'
    ' /vanuatu/export/system/modules/VTO/resources/images/nto_kids_logo.jpg'
    ' HTTP/1.1" 200 10420 "-" "Mozilla/4.0 (compatible; MSIE 6.0; Windows NT'
    ' 5.1; SV1; .NET CLR 1.1.4322)"',
    '83.77.134.184 - - [18/Jun/2006:12:29:41 +0000] "GET'
    ' /vanuatu/export/system/modules/VTO/resources/images/vanuatu.gif'
    ' HTTP/1.1" 200 40892 "-" "Mozilla/4.0 (compatible; MSIE 6.0; Windows NT'
    ' 5.1; SV1; .NET CLR 1.1.4322)"',
]

# NASA-style CLF sample: one visitor browsing seven mission pages in two
# minutes, and a second visitor whose two bursts sit 148+ minutes apart.
NASA_CLF_ROWS = [
    ("128.102.204.243", "22/Jul/1995:01:16:58",
     "/shuttle/missions/sts-73/mission-sts-73.html"),
    ("128.102.204.243", "22/Jul/1995:01:17:25",
     "/shuttle/missions/sts-74/mission-sts-74.html"),
    ("128.102.204.243", "22/Jul/1995:01:17:38",
     "/shuttle/missions/sts-72/mission-sts-72.html"),
    ("128.102.204.243", "22/Jul/1995:01:17:45",
     "/shuttle/missions/sts-75/mission-sts-75.html"),
    ("128.102.204.243", "22/Jul/1995:01:17:52",
     "/shuttle/missions/sts-76/mission-sts-76.html"),
    ("128.102.204.243", "22/Jul/1995:01:17:58",
     "/shuttle/missions/sts-77/mission-sts-77.html"),
    ("128.102.204.243", "22/Jul/1995:01:18:05",
     "/shuttle/missions/sts-78/mission-sts-78.html"),
    ("128.102.210.40", "20/Jul/1995:23:27:49",
     "/shuttle/countdown/countdown.html"),
    ("128.102.210.40", "20/Jul/1995:23:28:11",
     "/shuttle/technology/sts-newsref/stsref-toc.html"),
    ("128.102.210.40", "20/Jul/1995:23:28:57",
     "/shuttle/technology/sts-newsref/sts_mes.html"),
    ("128.102.210.40", "20/Jul/1995:23:29:11",
     "/shuttle/countdown/liftoff.html"),
    ("128.102.210.40", "20/Jul/1995:23:30:18",
     "/shuttle/missions/sts-69/mission-sts-69.html"),
    ("128.102.210.40", "21/Jul/1995:01:58:47",
     "/shuttle/countdown/countdown.html"),
    ("128.102.210.40", "21/Jul/1995:01:59:12",
     "/shuttle/countdown/liftoff.html"),
]

NASA_CLF_LINES = [
    f'{host} - - [{stamp} +0000] "GET {path} HTTP/1.0" 200 1024'
    for host, stamp, path in NASA_CLF_ROWS
]


@pytest.fixture
def sample_eclf_lines():
    return list(SAMPLE_ECLF_LINES)


@pytest.fixture
def sample_eclf_file(tmp_path):
    path = tmp_path / "vanuatu.log"
    path.write_text("\n".join(SAMPLE_ECLF_LINES) + "\n")
    return path


@pytest.fixture
def nasa_clf_lines():
    return list(NASA_CLF_LINES)


@pytest.fixture
def nasa_clf_file(tmp_path):
    path = tmp_path / "nasa.log"
    path.write_text("\n".join(NASA_CLF_LINES) + "\n")
    return path
