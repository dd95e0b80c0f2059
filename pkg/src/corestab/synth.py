"""Synthetic multi-day post corpora with planted ground truth.

Each planted clique emits, every day, one post per synthetic user containing
all of its tags, so every pairwise edge has exactly the configured daily
user support. Each clique also owns one transient tag (``tempNN``) that, on
days where an independent coin flip under ``transient_rate`` comes up
active, co-posts pairwise with every clique member at ``transient_support``
users; pairwise posts keep the planted supports exact. Noise posts draw 1-3
tags from a reserved ``noiseNN`` vocabulary with fresh users per post.

Users are namespaced by day, so supports are exact and independent across
days. Generation is a pure function of the seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError
from .ingest import DEFAULT_EPOCH, SECONDS_PER_DAY, PostRecord, epoch_day_start, normalize_hashtag

NOISE_VOCAB = tuple(f"noise{i:02d}" for i in range(40))
RESERVED_PREFIXES = ("noise", "temp")

MAX_NOISE_TAGS_PER_POST = 3


@dataclass(frozen=True)
class SynthConfig:
    seed: int = 0
    days: int = 1
    planted_cliques: tuple[tuple[tuple[str, ...], int], ...] = ()
    transient_rate: float = 0.0
    transient_support: int = 0
    noise_posts: int = 0

    def validate(self) -> "SynthConfig":
        if self.days < 0 or self.transient_support < 0 or self.noise_posts < 0:
            raise ConfigError("synth counts must be non-negative")
        if not 0.0 <= self.transient_rate <= 1.0:
            raise ConfigError(f"transient_rate must be in [0,1], got {self.transient_rate}")
        seen: set[str] = set()
        for tags, users in self.planted_cliques:
            if len(tags) < 2:
                raise ConfigError("each planted clique needs at least 2 tags")
            if users < 0:
                raise ConfigError("planted daily user counts must be non-negative")
            for tag in tags:
                if normalize_hashtag(tag) != tag:
                    raise ConfigError(f"planted tag {tag!r} is not in normalized form")
                if tag.startswith(RESERVED_PREFIXES):
                    raise ConfigError(f"planted tag {tag!r} uses a reserved prefix {RESERVED_PREFIXES}")
                if tag in seen:
                    raise ConfigError(f"planted cliques must be pairwise disjoint; {tag!r} repeats")
                seen.add(tag)
        return self


def transient_tag(clique_index: int) -> str:
    return f"temp{clique_index:02d}"


def generate(config: SynthConfig) -> dict[int, list[PostRecord]]:
    """Per-day post lists for the configured corpus."""
    config.validate()
    base_ts = epoch_day_start(DEFAULT_EPOCH)
    corpus: dict[int, list[PostRecord]] = {}
    for day in range(config.days):
        # Per-day sub-seed: days can regenerate independently and in parallel.
        rng = random.Random(config.seed * 1_000_003 + day)
        posts: list[PostRecord] = []

        def add_post(user: str, tags: tuple[str, ...]) -> None:
            seq = len(posts)
            ts = base_ts + day * SECONDS_PER_DAY + (seq % SECONDS_PER_DAY)
            posts.append(PostRecord(f"d{day}p{seq}", ts, user, tuple(sorted(tags))))

        for i, (tags, daily_users) in enumerate(config.planted_cliques):
            for k in range(daily_users):
                add_post(f"d{day}c{i}u{k}", tuple(tags))
            active = rng.random() < config.transient_rate
            if active and config.transient_support > 0:
                extra = transient_tag(i)
                for k in range(config.transient_support):
                    user = f"d{day}x{i}u{k}"
                    for member in sorted(tags):
                        add_post(user, (extra, member))

        for p in range(config.noise_posts):
            count = rng.randint(1, MAX_NOISE_TAGS_PER_POST)
            tags = tuple(rng.sample(NOISE_VOCAB, count))
            add_post(f"d{day}z{p}", tags)

        corpus[day] = posts
    return corpus


def _parse_planted(value: str) -> tuple[tuple[tuple[str, ...], int], ...]:
    cliques = []
    for entry in value.split(","):
        entry = entry.strip()
        if not entry:
            continue
        tags_part, sep, users_part = entry.partition("@")
        if not sep:
            raise ConfigError(f"planted clique entry {entry!r} needs tags@daily_users")
        tags = tuple(sorted(t.strip() for t in tags_part.split(":") if t.strip()))
        try:
            users = int(users_part)
        except ValueError:
            raise ConfigError(f"bad daily user count in planted clique entry {entry!r}") from None
        cliques.append((tags, users))
    return tuple(cliques)


_INT_KEYS = ("seed", "days", "transient_support", "noise_posts")


def load_synth_config(path: str | Path) -> SynthConfig:
    """Read a flat `key = value` config file (lists as comma-joined entries).

    Keys: seed, days, planted_cliques, transient_rate, transient_support,
    noise_posts. Planted clique entries look like ``work:school:office@10``.
    Blank lines and lines starting with '#' are skipped.
    """
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read synth config {path}: {exc}") from exc
    values: dict = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected key = value, got {raw!r}")
        key = key.strip()
        value = value.strip()
        if key in _INT_KEYS:
            try:
                values[key] = int(value)
            except ValueError:
                raise ConfigError(f"{path}:{lineno}: {key} must be an integer") from None
        elif key == "transient_rate":
            try:
                values[key] = float(value)
            except ValueError:
                raise ConfigError(f"{path}:{lineno}: transient_rate must be a number") from None
        elif key == "planted_cliques":
            values[key] = _parse_planted(value)
        else:
            raise ConfigError(f"{path}:{lineno}: unknown synth config key {key!r}")
    return SynthConfig(**values).validate()
