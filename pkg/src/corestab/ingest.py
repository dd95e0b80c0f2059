"""Post ingestion: hashtag normalization, file parsing and day bucketing.

Two input formats are supported:

  JSONL  one object per line with keys "id", "ts", "user", "tags"
  CSV    header ``post_id,ts,user_id,tags``, tags joined by ';'

Days are UTC calendar days counted from a configured epoch date: a post's
day index is ``floor((ts - epoch_midnight_utc) / 86400)``. Posts that
precede the epoch are dropped and counted.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass
from datetime import date, datetime, timezone
from pathlib import Path
from typing import Iterable, Iterator

from .errors import DataError
from .fileio import atomic_write_text

log = logging.getLogger(__name__)

SECONDS_PER_DAY = 86400
DEFAULT_EPOCH = date(2013, 10, 2)

CSV_HEADER = ["post_id", "ts", "user_id", "tags"]


@dataclass(frozen=True)
class PostRecord:
    """One timestamped post with its normalized, deduplicated hashtags."""

    post_id: str
    timestamp: int
    user_id: str
    hashtags: tuple[str, ...]


@dataclass
class IngestStats:
    """Counters kept while parsing and bucketing post files."""

    parsed: int = 0
    malformed: int = 0
    dropped_pre_epoch: int = 0


def normalize_hashtag(raw: str) -> str | None:
    """Normalize a raw hashtag, or return None if nothing usable remains.

    Surrounding whitespace and leading '#' markers are removed and the rest
    is lowercased. Tags that end up empty or still contain whitespace are
    rejected. Every leading '#' is stripped (not just one) so the function
    is idempotent: feeding a normalized tag back in returns it unchanged.
    """
    tag = raw.strip().lstrip("#").lower()
    if not tag or any(ch.isspace() for ch in tag):
        return None
    return tag


def _normalize_tags(raw_tags: Iterable[str]) -> tuple[str, ...]:
    seen = set()
    for raw in raw_tags:
        tag = normalize_hashtag(raw)
        if tag is not None:
            seen.add(tag)
    return tuple(sorted(seen))


def _post_from_json_line(line: str) -> PostRecord | None:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError:
        return None
    if not isinstance(obj, dict):
        return None
    post_id = obj.get("id")
    ts = obj.get("ts")
    user = obj.get("user")
    tags = obj.get("tags")
    if not isinstance(post_id, str) or not isinstance(user, str):
        return None
    if isinstance(ts, bool) or not isinstance(ts, (int, float)):
        return None
    if not isinstance(tags, list) or any(not isinstance(t, str) for t in tags):
        return None
    return PostRecord(post_id, int(ts), user, _normalize_tags(tags))


def _post_from_csv_row(row: list[str]) -> PostRecord | None:
    if len(row) != 4:
        return None
    post_id, ts_text, user, tags_text = row
    try:
        ts = int(ts_text)
    except ValueError:
        return None
    raw_tags = tags_text.split(";") if tags_text else []
    return PostRecord(post_id, ts, user, _normalize_tags(raw_tags))


def parse_posts(path: str | Path, fmt: str = "jsonl", stats: IngestStats | None = None) -> Iterator[PostRecord]:
    """Yield one PostRecord per well-formed line of a post file.

    Malformed lines are skipped and counted in ``stats.malformed`` (a warning
    is logged). An unreadable file or an unknown format raises DataError.
    """
    path = Path(path)
    if stats is None:
        stats = IngestStats()
    if fmt == "jsonl":
        yield from _parse_jsonl(path, stats)
    elif fmt == "csv":
        yield from _parse_csv(path, stats)
    else:
        raise DataError(f"unknown post format {fmt!r} (expected jsonl or csv)")


def _parse_jsonl(path: Path, stats: IngestStats) -> Iterator[PostRecord]:
    try:
        fh = path.open("r", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read posts file {path}: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            post = _post_from_json_line(line)
            if post is None:
                stats.malformed += 1
                log.warning("%s:%d: skipping malformed JSONL post line", path, lineno)
                continue
            stats.parsed += 1
            yield post


def _parse_csv(path: Path, stats: IngestStats) -> Iterator[PostRecord]:
    try:
        fh = path.open("r", encoding="utf-8", newline="")
    except OSError as exc:
        raise DataError(f"cannot read posts file {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty CSV posts file (missing header)") from None
        if [h.strip() for h in header] != CSV_HEADER:
            raise DataError(f"{path}: bad CSV header {header!r}, expected {','.join(CSV_HEADER)}")
        for row in reader:
            if not row:
                continue
            post = _post_from_csv_row(row)
            if post is None:
                stats.malformed += 1
                log.warning("%s: skipping malformed CSV post row %r", path, row)
                continue
            stats.parsed += 1
            yield post


def epoch_day_start(epoch: date) -> int:
    """Epoch seconds of UTC midnight at the start of the given date."""
    return int(datetime(epoch.year, epoch.month, epoch.day, tzinfo=timezone.utc).timestamp())


def day_index(timestamp: int, epoch: date) -> int:
    """UTC calendar day offset of a timestamp relative to the epoch date."""
    return (int(timestamp) - epoch_day_start(epoch)) // SECONDS_PER_DAY


def bucket_by_day(
    posts: Iterable[PostRecord], epoch: date, stats: IngestStats | None = None
) -> dict[int, list[PostRecord]]:
    """Partition posts into per-day lists keyed by day index.

    Posts before the epoch date get a negative index and are dropped,
    counted in ``stats.dropped_pre_epoch``.
    """
    if stats is None:
        stats = IngestStats()
    start = epoch_day_start(epoch)
    buckets: dict[int, list[PostRecord]] = {}
    for post in posts:
        day = (post.timestamp - start) // SECONDS_PER_DAY
        if day < 0:
            stats.dropped_pre_epoch += 1
            continue
        buckets.setdefault(day, []).append(post)
    return dict(sorted(buckets.items()))


def posts_to_jsonl(posts: Iterable[PostRecord]) -> str:
    lines = []
    for post in posts:
        obj = {"id": post.post_id, "ts": post.timestamp, "user": post.user_id, "tags": list(post.hashtags)}
        lines.append(json.dumps(obj, ensure_ascii=False, separators=(",", ":")))
    return "\n".join(lines) + ("\n" if lines else "")


def write_posts_jsonl(path: str | Path, posts: Iterable[PostRecord]) -> Path:
    """Write posts in the JSONL input format (atomic)."""
    return atomic_write_text(path, posts_to_jsonl(posts))
