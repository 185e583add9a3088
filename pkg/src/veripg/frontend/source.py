"""Source file container with byte-offset to line mapping."""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from pathlib import Path


@dataclass
class SourceFile:
    path: str
    text: str
    line_index: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.line_index:
            offsets = [0]
            for i, ch in enumerate(self.text):
                if ch == "\n":
                    offsets.append(i + 1)
            self.line_index = tuple(offsets)

    @classmethod
    def from_path(cls, path: str | Path) -> "SourceFile":
        p = Path(path)
        return cls(path=str(p), text=p.read_bytes().decode("utf-8"))

    def line_of(self, offset: int) -> int:
        """1-based line containing the byte at `offset`."""
        if offset < 0 or offset > len(self.text):
            raise ValueError(f"offset {offset} outside source of length {len(self.text)}")
        return bisect.bisect_right(self.line_index, offset)

    @property
    def line_count(self) -> int:
        return len(self.text.splitlines()) or 1
