"""Loading Book-Crossing style CSV dumps.

The three files share one dialect: ``;`` delimited, double-quoted fields,
a single header row and Latin-1 bytes. Rows that cannot be parsed are
counted, never silently skipped.
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass, field
from os import PathLike
from typing import Iterator

import numpy as np

log = logging.getLogger(__name__)

RATINGS_HEADER = '"User-ID";"ISBN";"Book-Rating"'
USERS_HEADER = '"User-ID";"Location";"Age"'
BOOKS_HEADER = '"ISBN";"Book-Title";"Book-Author"'

MIN_RATING = 0
MAX_RATING = 10
PLAUSIBLE_AGE = (1, 120)


@dataclass(frozen=True)
class CsvDialect:
    delimiter: str = ";"
    quotechar: str = '"'
    escapechar: str | None = "\\"
    encoding: str = "latin-1"
    errors: str = "replace"


BX_DIALECT = CsvDialect()


class HeaderError(ValueError):
    """The first line of a CSV file is not the expected header."""


@dataclass(frozen=True)
class RatingBand:
    """Inclusive rating interval on the 0..10 scale."""

    low: int
    high: int

    def __post_init__(self):
        if not (MIN_RATING <= self.low <= self.high <= MAX_RATING):
            raise ValueError(
                f"invalid rating band {self.low}..{self.high}; need "
                f"{MIN_RATING} <= low <= high <= {MAX_RATING}"
            )

    @classmethod
    def parse(cls, text: str) -> "RatingBand":
        """Parse ``"lo:hi"`` (``"lo..hi"`` and ``"lo-hi"`` also accepted)."""
        for sep in (":", "..", "-"):
            if sep in text:
                lo, hi = text.split(sep, 1)
                return cls(int(lo), int(hi))
        value = int(text)
        return cls(value, value)

    def intersect(self, other: "RatingBand") -> "RatingBand | None":
        lo, hi = max(self.low, other.low), min(self.high, other.high)
        return RatingBand(lo, hi) if lo <= hi else None

    def __contains__(self, rating: int) -> bool:
        return self.low <= rating <= self.high

    def __str__(self) -> str:
        return f"{self.low}:{self.high}"


ALL_RATINGS = RatingBand(0, 10)
EXPLICIT = RatingBand(1, 10)
PREFERENCE = RatingBand(6, 10)
NON_PREFERENCE = RatingBand(1, 5)


@dataclass(frozen=True, eq=False)
class RatingTable:
    """Cleaned (user, isbn, rating) triples plus load counters.

    ``rows_read == len(self) + rows_rejected + duplicates_dropped`` always
    holds; :func:`filter_ratings` counts the rows outside the band as
    rejected.
    """

    user_ids: np.ndarray
    isbns: np.ndarray
    ratings: np.ndarray
    rows_read: int = 0
    rows_rejected: int = 0
    duplicates_dropped: int = 0

    def __post_init__(self):
        n = len(self.ratings)
        if len(self.user_ids) != n or len(self.isbns) != n:
            raise ValueError("user_ids, isbns and ratings must have equal length")
        if self.rows_read != n + self.rows_rejected + self.duplicates_dropped:
            raise ValueError("counters do not add up to rows_read")
        for arr in (self.user_ids, self.isbns, self.ratings):
            arr.flags.writeable = False

    @classmethod
    def from_triples(cls, triples) -> "RatingTable":
        """Build a table from in-memory ``(user, isbn, rating)`` triples.

        Goes through the same validation and de-duplication as a file load.
        """
        return _collect(((str(u), str(i), str(r)) for u, i, r in triples))

    def __len__(self) -> int:
        return len(self.ratings)

    def __iter__(self) -> Iterator[tuple[str, str, int]]:
        return zip(self.user_ids.tolist(), self.isbns.tolist(), self.ratings.tolist())

    def triples(self) -> list[tuple[str, str, int]]:
        return list(self)

    def same_triples(self, other: "RatingTable") -> bool:
        return (
            np.array_equal(self.user_ids, other.user_ids)
            and np.array_equal(self.isbns, other.isbns)
            and np.array_equal(self.ratings, other.ratings)
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatingTable):
            return NotImplemented
        return self.same_triples(other) and self.counters == other.counters

    @property
    def counters(self) -> tuple[int, int, int]:
        return (self.rows_read, self.rows_rejected, self.duplicates_dropped)


@dataclass(frozen=True)
class UserRecord:
    user_id: str
    location: str | None = None
    age: int | None = None
    age_flagged: bool = False

    @property
    def country(self) -> str | None:
        if not self.location:
            return None
        tail = self.location.rsplit(",", 1)[-1].strip()
        return tail or None


@dataclass(frozen=True)
class BookRecord:
    isbn: str
    title: str | None = None
    author: str | None = None


@dataclass(frozen=True)
class UserTable:
    records: dict[str, UserRecord] = field(default_factory=dict)
    rows_read: int = 0
    rows_rejected: int = 0

    def __len__(self):
        return len(self.records)

    def get(self, user_id: str) -> UserRecord | None:
        return self.records.get(str(user_id).strip())


@dataclass(frozen=True)
class BookTable:
    records: dict[str, BookRecord] = field(default_factory=dict)
    rows_read: int = 0
    rows_rejected: int = 0

    def __len__(self):
        return len(self.records)

    def get(self, isbn: str) -> BookRecord | None:
        return self.records.get(normalize_isbn(isbn))


def normalize_isbn(raw: str) -> str:
    """Trim whitespace and upper-case a trailing ``x`` check character."""
    isbn = raw.strip()
    if isbn.endswith("x"):
        isbn = isbn[:-1] + "X"
    return isbn


def _missing(value: str | None) -> bool:
    return value is None or value.strip() == "" or value.strip().upper() == "NULL"


def _read_rows(path, dialect: CsvDialect, expected_header: str, exact: bool):
    """Yield parsed data rows after checking the header line."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc}") from exc
    text = raw.decode(dialect.encoding, errors=dialect.errors)
    if text.startswith("\ufeff"):
        text = text[1:]
    first, _, body = text.partition("\n")
    header = first.rstrip("\r")
    ok = header == expected_header if exact else header.startswith(expected_header)
    if not ok:
        raise HeaderError(
            f"{path}: expected header {expected_header!r}, found {header[:80]!r}"
        )
    reader = csv.reader(
        io.StringIO(body),
        delimiter=dialect.delimiter,
        quotechar=dialect.quotechar,
        escapechar=dialect.escapechar,
        doublequote=True,
        strict=False,
    )
    for row in reader:
        if not row or row == [""]:
            continue
        yield row


def _collect(rows) -> RatingTable:
    users, isbns, ratings = [], [], []
    seen: set[tuple[str, str]] = set()
    read = rejected = dupes = 0
    for row in rows:
        read += 1
        if len(row) != 3:
            rejected += 1
            continue
        user, isbn, rating = row[0].strip(), normalize_isbn(row[1]), row[2].strip()
        try:
            value = int(rating)
        except ValueError:
            rejected += 1
            continue
        if not user or not isbn or not (MIN_RATING <= value <= MAX_RATING):
            rejected += 1
            continue
        key = (user, isbn)
        if key in seen:
            dupes += 1
            continue
        seen.add(key)
        users.append(user)
        isbns.append(isbn)
        ratings.append(value)
    return RatingTable(
        np.array(users, dtype=object),
        np.array(isbns, dtype=object),
        np.array(ratings, dtype=np.int8),
        rows_read=read,
        rows_rejected=rejected,
        duplicates_dropped=dupes,
    )


def parse_ratings(path: str | PathLike, dialect: CsvDialect = BX_DIALECT) -> RatingTable:
    """Load ``BX-Book-Ratings.csv``.

    The first (user, isbn) occurrence wins; later ones count as duplicates.
    Rows with the wrong field count, a non-integer rating or a rating
    outside 0..10 count as rejected.
    """
    table = _collect(_read_rows(path, dialect, RATINGS_HEADER, exact=True))
    log.info(
        "%s: %d rows, %d kept, %d rejected, %d duplicates",
        path, table.rows_read, len(table), table.rows_rejected, table.duplicates_dropped,
    )
    return table


def parse_users(path: str | PathLike, dialect: CsvDialect = BX_DIALECT) -> UserTable:
    records: dict[str, UserRecord] = {}
    read = rejected = 0
    for row in _read_rows(path, dialect, USERS_HEADER, exact=False):
        read += 1
        user_id = row[0].strip() if row else ""
        if not user_id or user_id in records or len(row) < 2:
            rejected += 1
            continue
        location = None if _missing(row[1]) else row[1].strip()
        age = None
        flagged = False
        if len(row) > 2 and not _missing(row[2]):
            try:
                age = int(float(row[2]))
            except ValueError:
                flagged = True
            else:
                flagged = not (PLAUSIBLE_AGE[0] <= age <= PLAUSIBLE_AGE[1])
        records[user_id] = UserRecord(user_id, location, age, flagged)
    return UserTable(records, read, rejected)


def parse_books(path: str | PathLike, dialect: CsvDialect = BX_DIALECT) -> BookTable:
    records: dict[str, BookRecord] = {}
    read = rejected = 0
    for row in _read_rows(path, dialect, BOOKS_HEADER, exact=False):
        read += 1
        isbn = normalize_isbn(row[0]) if row else ""
        if not isbn or isbn in records:
            rejected += 1
            continue
        title = row[1].strip() if len(row) > 1 and not _missing(row[1]) else None
        author = row[2].strip() if len(row) > 2 and not _missing(row[2]) else None
        records[isbn] = BookRecord(isbn, title, author)
    return BookTable(records, read, rejected)


def filter_ratings(table: RatingTable, band: RatingBand) -> RatingTable:
    """Keep the triples whose rating lies in ``band``."""
    keep = (table.ratings >= band.low) & (table.ratings <= band.high)
    kept = int(keep.sum())
    return RatingTable(
        table.user_ids[keep],
        table.isbns[keep],
        table.ratings[keep],
        rows_read=len(table),
        rows_rejected=len(table) - kept,
        duplicates_dropped=0,
    )
