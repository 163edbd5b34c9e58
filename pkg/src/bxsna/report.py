"""Named tables and their CSV / JSON / markdown renderings."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

FORMATS = ("csv", "json", "md")


def f8(x) -> str:
    return "-" if x is None else f"{x:.8f}"


def f5(x) -> str:
    return "-" if x is None else f"{x:.5f}"


def f4(x) -> str:
    return "-" if x is None else f"{x:.4f}"


def share(part: int, whole: int) -> str:
    return f"{part} ({100 * part / whole:.3f}%)" if whole else str(part)


@dataclass
class Table:
    """A captioned table; cells are ints or already-formatted strings."""

    name: str
    caption: str
    headers: list[str]
    rows: list[list] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add(self, *cells) -> None:
        if len(cells) != len(self.headers):
            raise ValueError(f"{self.name}: expected {len(self.headers)} cells, got {len(cells)}")
        self.rows.append(["" if c is None else c for c in cells])

    def cell(self, row_label, column: int = 1):
        """Cell of the first row whose first cell equals ``row_label``."""
        for row in self.rows:
            if str(row[0]) == str(row_label):
                return row[column]
        raise KeyError(row_label)

    def to_csv(self, checksum: str | None = None) -> str:
        buf = io.StringIO()
        if checksum:
            buf.write(f"# dataset_sha256={checksum}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.headers)
        writer.writerows(self.rows)
        return buf.getvalue()

    def to_json(self, checksum: str | None = None) -> str:
        doc = {
            "name": self.name,
            "caption": self.caption,
            "dataset_sha256": checksum,
            "headers": self.headers,
            "rows": self.rows,
            "notes": self.notes,
        }
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"

    def to_markdown(self, checksum: str | None = None) -> str:
        def esc(c):
            return str(c).replace("|", "\\|")

        lines = [f"**{self.caption}**", ""]
        lines.append("| " + " | ".join(esc(h) for h in self.headers) + " |")
        lines.append("|" + "---|" * len(self.headers))
        lines.extend("| " + " | ".join(esc(c) for c in row) + " |" for row in self.rows)
        lines.append("")
        lines.extend(f"_{n}_" for n in self.notes)
        if checksum:
            lines.append(f"<sub>dataset sha256 {checksum}</sub>")
        return "\n".join(lines) + "\n"

    def render(self, fmt: str, checksum: str | None = None) -> str:
        return {"csv": self.to_csv, "json": self.to_json, "md": self.to_markdown}[fmt](checksum)


@dataclass
class ReportBundle:
    tables: dict[str, Table] = field(default_factory=dict)
    manifest: dict = field(default_factory=dict)

    def add(self, table: Table) -> Table:
        self.tables[table.name] = table
        return table

    def __getitem__(self, name: str) -> Table:
        return self.tables[name]

    def __contains__(self, name: str) -> bool:
        return name in self.tables

    def ordered(self) -> list[Table]:
        return [self.tables[k] for k in sorted(self.tables)]

    def write(self, out_dir: str | Path, formats=FORMATS) -> list[Path]:
        out = Path(out_dir) / "tables"
        out.mkdir(parents=True, exist_ok=True)
        checksum = self.manifest.get("dataset_sha256")
        written = []
        for table in self.ordered():
            for fmt in formats:
                path = out / f"{table.name}.{fmt}"
                path.write_text(table.render(fmt, checksum), encoding="utf-8")
                written.append(path)
        return written

    def write_manifest(self, out_dir: str | Path) -> Path:
        path = Path(out_dir) / "manifest.json"
        doc = dict(self.manifest)
        doc["tables"] = [t.name for t in self.ordered()]
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return path
