"""Corpus manifest and precision/recall/F1 scoring of scan findings."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

CATEGORY_MAP: dict[str, tuple[str, ...]] = {
    "Improper Access Control": ("CWE-1231", "CWE-1243", "CWE-1244", "CWE-1280"),
    "Improper Resource Operate": ("CWE-226", "CWE-1258", "CWE-1271"),
    "Improper Lock": ("CWE-1232", "CWE-1234"),
    "Side Channel": ("CWE-1255", "CWE-1300"),
    "Finite State Machine": ("CWE-1245",),
}

ALL_CWES: tuple[str, ...] = tuple(c for cwes in CATEGORY_MAP.values() for c in cwes)


class MissingFindings(Exception):
    def __init__(self, design: str):
        super().__init__(f"no findings supplied for design {design!r}")
        self.design = design


@dataclass(frozen=True)
class CorpusEntry:
    path: str
    cwe: str  # a CWE id or "none"
    origin: str  # seed | mutated | patched
    mutation: str | None = None


def save_manifest(entries: list[CorpusEntry], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for e in entries:
            fh.write(json.dumps(asdict(e), sort_keys=True) + "\n")


def load_manifest(path: str | Path) -> list[CorpusEntry]:
    entries = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        doc = json.loads(line)
        entries.append(
            CorpusEntry(doc["path"], doc["cwe"], doc["origin"], doc.get("mutation"))
        )
    return entries


@dataclass
class Tally:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    def metrics(self) -> dict:
        p = self.tp / (self.tp + self.fp) if (self.tp + self.fp) else 0.0
        r = self.tp / (self.tp + self.fn) if (self.tp + self.fn) else 0.0
        f1 = 2 * p * r / (p + r) if (p + r) else 0.0
        return {
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "tn": self.tn,
            "precision": round(p, 6),
            "recall": round(r, 6),
            "f1": round(f1, 6),
        }


@dataclass
class ScoreReport:
    per_category: dict[str, dict] = field(default_factory=dict)
    total: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"per_category": self.per_category, "total": self.total}

    def format_table(self) -> str:
        header = f"{'Category':<28} {'P':>8} {'R':>8} {'F1':>8} {'TP':>4} {'FP':>4} {'FN':>4} {'TN':>4}"
        lines = [header, "-" * len(header)]
        rows = list(self.per_category.items()) + [("Total", self.total)]
        for name, m in rows:
            lines.append(
                f"{name:<28} {m['precision']:>8.4f} {m['recall']:>8.4f} {m['f1']:>8.4f}"
                f" {m['tp']:>4} {m['fp']:>4} {m['fn']:>4} {m['tn']:>4}"
            )
        return "\n".join(lines)


def score(entries: list[CorpusEntry], findings_by_design: dict[str, list]) -> ScoreReport:
    """Per-CWE detection scoring: a design is a hit for CWE c iff the rule
    carrying c fired; cross-CWE firings count as false positives."""
    per_cwe: dict[str, Tally] = {c: Tally() for c in ALL_CWES}
    for entry in entries:
        if entry.path not in findings_by_design:
            raise MissingFindings(entry.path)
        findings = findings_by_design[entry.path]
        fired = {f.cwe for f in findings if f.vulnerable}
        for cwe in ALL_CWES:
            positive = entry.cwe == cwe
            hit = cwe in fired
            tally = per_cwe[cwe]
            if positive and hit:
                tally.tp += 1
            elif positive:
                tally.fn += 1
            elif hit:
                tally.fp += 1
            else:
                tally.tn += 1

    report = ScoreReport()
    total = Tally()
    for category, cwes in CATEGORY_MAP.items():
        cat = Tally()
        for cwe in cwes:
            t = per_cwe[cwe]
            cat.tp += t.tp
            cat.fp += t.fp
            cat.fn += t.fn
            cat.tn += t.tn
        total.tp += cat.tp
        total.fp += cat.fp
        total.fn += cat.fn
        total.tn += cat.tn
        report.per_category[category] = cat.metrics()
    report.total = total.metrics()
    return report
