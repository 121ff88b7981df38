"""Domain vocabulary: constructions, observations, and per-verb count tables."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Iterator, Mapping, NamedTuple

import numpy as np

__all__ = [
    "Construction",
    "Observation",
    "BetaParams",
    "conjugate_update",
    "CountTable",
]


class Construction(Enum):
    """The two ditransitive frames; DO is the success outcome throughout."""

    DO = "DO"
    PO = "PO"


class Observation(NamedTuple):
    """A single use of a verb in one of the two frames."""

    verb: str
    construction: Construction


@dataclass(frozen=True)
class BetaParams:
    """Pseudo-count parameters of a Beta distribution over a binary rate."""

    a: float
    b: float

    def __post_init__(self) -> None:
        ok = np.isfinite(self.a) and np.isfinite(self.b) and self.a > 0 and self.b > 0
        if not ok:
            raise ValueError(f"Beta parameters must be finite and positive, got ({self.a!r}, {self.b!r})")

    def mean(self) -> float:
        return self.a / (self.a + self.b)


def conjugate_update(prior: BetaParams, successes: int, trials: int) -> BetaParams:
    """Fold `successes` out of `trials` binary outcomes into Beta pseudo-counts."""
    if not 0 <= successes <= trials:
        raise ValueError(f"need 0 <= successes <= trials, got {successes}/{trials}")
    return BetaParams(prior.a + successes, prior.b + (trials - successes))


def _checked_verb(verb: object) -> str:
    if not isinstance(verb, str) or not verb:
        raise ValueError(f"verb must be a non-empty string, got {verb!r}")
    if verb != verb.lower() or any(ch in verb for ch in ",; \t\n"):
        raise ValueError(f"verb must be a lowercase token without separators, got {verb!r}")
    return verb


def _checked_count(value: object, verb: str, what: str) -> int:
    count = int(value)  # type: ignore[call-overload]
    if count != value or count < 0:
        raise ValueError(f"{what} for verb {verb!r} must be a non-negative integer, got {value!r}")
    return count


@dataclass(frozen=True)
class CountTable:
    """Per-verb DO/total counts over a fixed, ordered lexicon.

    Immutable value object. Verbs never observed still occupy a row with
    counts (0, 0) so that cross-verb generalization can reach them; all
    update operations preserve the lexicon and its order.
    """

    verbs: tuple[str, ...]
    do_counts: tuple[int, ...]
    total_counts: tuple[int, ...]

    def __post_init__(self) -> None:
        verbs = tuple(_checked_verb(v) for v in self.verbs)
        if len(set(verbs)) != len(verbs):
            raise ValueError("lexicon contains duplicate verbs")
        if not (len(verbs) == len(self.do_counts) == len(self.total_counts)):
            raise ValueError("verbs, do_counts and total_counts must have equal length")
        dos = tuple(_checked_count(c, v, "do_count") for v, c in zip(verbs, self.do_counts))
        totals = tuple(_checked_count(c, v, "total_count") for v, c in zip(verbs, self.total_counts))
        for verb, do, total in zip(verbs, dos, totals):
            if do > total:
                raise ValueError(f"verb {verb!r} has do_count {do} above total_count {total}")
        object.__setattr__(self, "verbs", verbs)
        object.__setattr__(self, "do_counts", dos)
        object.__setattr__(self, "total_counts", totals)

    # -- construction -----------------------------------------------------

    @classmethod
    def empty(cls, lexicon: Iterable[str]) -> CountTable:
        verbs = tuple(lexicon)
        return cls(verbs, (0,) * len(verbs), (0,) * len(verbs))

    @classmethod
    def from_observations(cls, observations: Iterable[Observation], lexicon: Iterable[str]) -> CountTable:
        """Tally verb/construction observations over an explicit lexicon."""
        verbs = tuple(lexicon)
        index = {verb: i for i, verb in enumerate(verbs)}
        dos = [0] * len(verbs)
        totals = [0] * len(verbs)
        for verb, construction in observations:
            i = index.get(verb)
            if i is None:
                raise ValueError(f"observation uses verb {verb!r} which is not in the lexicon")
            if not isinstance(construction, Construction):
                raise ValueError(f"expected a Construction, got {construction!r}")
            totals[i] += 1
            if construction is Construction.DO:
                dos[i] += 1
        return cls(verbs, tuple(dos), tuple(totals))

    @classmethod
    def from_mapping(cls, counts: Mapping[str, tuple[int, int]], lexicon: Iterable[str]) -> CountTable:
        """Build from {verb: (do, total)}; verbs absent from the mapping get (0, 0)."""
        verbs = tuple(lexicon)
        unknown = sorted(set(counts) - set(verbs))
        if unknown:
            raise ValueError(f"counts reference verbs outside the lexicon: {unknown}")
        dos = tuple(counts.get(verb, (0, 0))[0] for verb in verbs)
        totals = tuple(counts.get(verb, (0, 0))[1] for verb in verbs)
        return cls(verbs, dos, totals)

    # -- access -----------------------------------------------------------

    def __len__(self) -> int:
        return len(self.verbs)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {verb: i for i, verb in enumerate(self.verbs)}

    @cached_property
    def do_array(self) -> np.ndarray:
        arr = np.asarray(self.do_counts, dtype=float)
        arr.setflags(write=False)
        return arr

    @cached_property
    def total_array(self) -> np.ndarray:
        arr = np.asarray(self.total_counts, dtype=float)
        arr.setflags(write=False)
        return arr

    def index(self, verb: str) -> int:
        try:
            return self._index[verb]
        except KeyError:
            raise ValueError(f"unknown verb {verb!r}") from None

    def do_count(self, verb: str) -> int:
        return self.do_counts[self.index(verb)]

    def total_count(self, verb: str) -> int:
        return self.total_counts[self.index(verb)]

    def grand_totals(self) -> tuple[int, int]:
        """(DO observations, all observations) summed over the lexicon."""
        return sum(self.do_counts), sum(self.total_counts)

    def rows(self) -> Iterator[tuple[str, int, int]]:
        """Yield (verb, do_count, total_count) in lexicon order."""
        yield from zip(self.verbs, self.do_counts, self.total_counts)

    # -- updates ----------------------------------------------------------

    def merge(self, other: CountTable) -> CountTable:
        """Coordinatewise sum; both tables must share one lexicon."""
        if self.verbs != other.verbs:
            raise ValueError("cannot merge count tables with different lexicons")
        return CountTable(
            self.verbs,
            tuple(a + b for a, b in zip(self.do_counts, other.do_counts)),
            tuple(a + b for a, b in zip(self.total_counts, other.total_counts)),
        )

    def __add__(self, other: CountTable) -> CountTable:
        if not isinstance(other, CountTable):
            return NotImplemented
        return self.merge(other)

    def with_observation(self, verb: str, construction: Construction) -> CountTable:
        """A copy with one extra observation of `verb` in `construction`."""
        i = self.index(verb)
        dos = list(self.do_counts)
        totals = list(self.total_counts)
        totals[i] += 1
        if construction is Construction.DO:
            dos[i] += 1
        return CountTable(self.verbs, tuple(dos), tuple(totals))

    def swapped(self) -> CountTable:
        """The same data with the DO and PO roles exchanged in every row."""
        return CountTable(
            self.verbs,
            tuple(t - d for d, t in zip(self.do_counts, self.total_counts)),
            self.total_counts,
        )
