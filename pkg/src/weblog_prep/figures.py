"""Render summary figures for the aggregate report alongside the tables."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .export import iso_utc
from .summary import AggregateReport


def render_report_figures(report: AggregateReport, output_dir: str) -> list[str]:
    """Write PNG figures into output_dir; returns the files written.

    Figures with no underlying data are skipped.
    """
    os.makedirs(output_dir, exist_ok=True)
    written = []

    for granularity, buckets in sorted(report.period_buckets.items(),
                                       key=lambda kv: kv[0].value):
        if not buckets:
            continue
        labels = [iso_utc(b.bucket_start) for b in buckets]
        fig, ax = plt.subplots(figsize=(max(6, 0.5 * len(buckets)), 4))
        ax.bar(range(len(buckets)), [b.requests for b in buckets],
               color="#4878a8", label="requests")
        ax.bar(range(len(buckets)), [b.visits for b in buckets],
               color="#e0a040", label="visits")
        ax.set_xticks(range(len(buckets)))
        ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=7)
        ax.set_ylabel("count")
        ax.set_title(f"Requests and visits per {granularity.value.lower()}")
        ax.legend()
        fig.tight_layout()
        path = os.path.join(output_dir,
                            f"requests_per_{granularity.value.lower()}.png")
        fig.savefig(path, metadata={"Software": None})
        plt.close(fig)
        written.append(path)

    if report.server_shares:
        names = list(report.server_shares)
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.bar(names, [report.server_shares[n] for n in names], color="#4878a8")
        ax.set_ylabel("% of kept requests")
        ax.set_title("Request share per server")
        fig.tight_layout()
        path = os.path.join(output_dir, "server_shares.png")
        fig.savefig(path, metadata={"Software": None})
        plt.close(fig)
        written.append(path)

    lengths = [s.length_seconds for s in report.session_stats]
    if lengths:
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.hist(lengths, bins=min(30, max(5, len(lengths))), color="#4878a8")
        ax.set_xlabel("session length (s)")
        ax.set_ylabel("sessions")
        ax.set_title("Session length distribution")
        fig.tight_layout()
        path = os.path.join(output_dir, "session_lengths.png")
        fig.savefig(path, metadata={"Software": None})
        plt.close(fig)
        written.append(path)

    return written
