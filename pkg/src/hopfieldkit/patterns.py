"""Bipolar activation patterns, RNA encoding, and partial-information helpers.

Patterns are plain numpy vectors with entries in {+1, -1, 0}; 0 marks an
unknown neuron. Fully specified patterns contain no zeros. All indices in
public interfaces are 1-based.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Two bits per RNA base. The map is injective, so sequences are recoverable.
BASE_TO_BITS = {
    "A": (-1, -1),
    "C": (-1, +1),
    "G": (+1, -1),
    "U": (+1, +1),
}


def as_pattern(values, d: int | None = None, allow_unknown: bool = True) -> np.ndarray:
    """Validate and return a pattern as a float64 vector.

    Entries must come from {+1, -1, 0}; zeros are rejected when
    allow_unknown is False.
    """
    x = np.asarray(values, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("pattern must be a non-empty 1-d vector")
    if d is not None and x.size != d:
        raise ValueError(f"pattern has length {x.size}, expected {d}")
    allowed = {-1.0, 0.0, 1.0} if allow_unknown else {-1.0, 1.0}
    bad = [i + 1 for i, v in enumerate(x) if float(v) not in allowed]
    if bad:
        raise ValueError(f"pattern entries outside {sorted(allowed)} at positions {bad[:8]}")
    return x


@dataclass(frozen=True)
class TrainingSet:
    """M fully specified patterns stacked row-wise into an (M, d) array."""

    patterns: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.patterns, dtype=float)
        if p.ndim != 2 or p.shape[0] < 1 or p.shape[1] < 1:
            raise ValueError("training set must be a non-empty (M, d) array")
        if not np.all(np.abs(p) == 1.0):
            raise ValueError("training patterns must be fully specified (+1/-1 only)")
        p = p.copy()
        p.setflags(write=False)
        object.__setattr__(self, "patterns", p)

    @property
    def m(self) -> int:
        return self.patterns.shape[0]

    @property
    def d(self) -> int:
        return self.patterns.shape[1]

    def pattern(self, m: int) -> np.ndarray:
        """Return pattern m (1-based)."""
        if not 1 <= m <= self.m:
            raise ValueError(f"pattern index {m} outside 1..{self.m}")
        return self.patterns[m - 1]


@dataclass(frozen=True)
class ClampSet:
    """Known neurons and their clamped values.

    indices are 1-based and strictly increasing; values is a full-length
    vector holding +/-1 on the clamped neurons and 0 elsewhere.
    """

    indices: tuple[int, ...]
    values: np.ndarray

    def __post_init__(self):
        v = as_pattern(self.values)
        d = v.size
        idx = tuple(int(i) for i in self.indices)
        if len(idx) == 0:
            raise ValueError("clamp set must contain at least one neuron")
        if any(not 1 <= i <= d for i in idx):
            raise ValueError(f"clamp indices must lie in 1..{d}")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError("clamp indices must be strictly increasing")
        mask = np.zeros(d, dtype=bool)
        mask[[i - 1 for i in idx]] = True
        if not np.all(np.abs(v[mask]) == 1.0):
            raise ValueError("clamped values must be +1/-1 on every clamped index")
        if np.any(v[~mask] != 0.0):
            raise ValueError("values must be 0 off the clamp set")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "values", v)

    @property
    def l(self) -> int:
        return len(self.indices)

    @property
    def d(self) -> int:
        return self.values.size

    def mask(self) -> np.ndarray:
        """Boolean vector, True on clamped neurons."""
        m = np.zeros(self.d, dtype=bool)
        m[[i - 1 for i in self.indices]] = True
        return m

    def projector(self) -> np.ndarray:
        """Diagonal projector P onto the clamped neurons, as a (d, d) matrix."""
        return np.diag(self.mask().astype(float))

    @classmethod
    def from_pattern(cls, pattern, indices) -> "ClampSet":
        """Clamp the given 1-based indices to their values in pattern."""
        x = as_pattern(pattern, allow_unknown=False)
        idx = tuple(sorted(int(i) for i in indices))
        values = np.zeros(x.size)
        for i in idx:
            if not 1 <= i <= x.size:
                raise ValueError(f"clamp index {i} outside 1..{x.size}")
            values[i - 1] = x[i - 1]
        return cls(idx, values)


def encode_rna(sequence: str) -> np.ndarray:
    """Encode an RNA string into a bipolar pattern, two neurons per base.

    T is accepted as a synonym for U so DNA-alphabet FASTA files work.
    Unknown symbols are rejected with their 1-based position.
    """
    if len(sequence) == 0:
        raise ValueError("cannot encode an empty sequence")
    out = np.empty(2 * len(sequence))
    for pos, ch in enumerate(sequence.upper()):
        base = "U" if ch == "T" else ch
        if base not in BASE_TO_BITS:
            raise ValueError(f"unknown base {ch!r} at position {pos + 1}")
        out[2 * pos], out[2 * pos + 1] = BASE_TO_BITS[base]
    return out


def base_indices_to_neurons(bases) -> tuple[int, ...]:
    """Map 1-based RNA-base indices to their neuron index pairs (2b-1, 2b)."""
    neurons = []
    for b in bases:
        b = int(b)
        if b < 1:
            raise ValueError(f"base index {b} must be >= 1")
        neurons.extend((2 * b - 1, 2 * b))
    return tuple(sorted(neurons))


def erase(pattern, keep, rng_seed=None) -> tuple[np.ndarray, ClampSet]:
    """Zero out every neuron not in keep.

    keep is either an iterable of 1-based indices or an integer count, in
    which case that many indices are drawn uniformly without replacement
    using rng_seed. Keeping nothing or everything is rejected: there would
    be nothing to clamp, or nothing to recover.
    """
    x = as_pattern(pattern, allow_unknown=False)
    d = x.size
    if isinstance(keep, (int, np.integer)):
        l = int(keep)
        if not 1 <= l < d:
            raise ValueError(f"keep count {l} must lie in 1..{d - 1}")
        rng = np.random.default_rng(rng_seed)
        idx = sorted(rng.choice(d, size=l, replace=False) + 1)
    else:
        idx = sorted(int(i) for i in keep)
        if len(idx) == 0:
            raise ValueError("keep set is empty, nothing to clamp")
        if len(set(idx)) != len(idx):
            raise ValueError("keep set contains duplicates")
        if len(idx) >= d:
            raise ValueError("keep set covers every neuron, nothing to recover")
    clamp = ClampSet.from_pattern(x, idx)
    incomplete = np.where(clamp.mask(), x, 0.0)
    return incomplete, clamp


def perturb(pattern, flip_count: int, rng_seed=None) -> np.ndarray:
    """Flip flip_count distinct neurons of a fully specified pattern."""
    x = as_pattern(pattern, allow_unknown=False).copy()
    if not 0 <= flip_count <= x.size:
        raise ValueError(f"flip count {flip_count} outside 0..{x.size}")
    rng = np.random.default_rng(rng_seed)
    pos = rng.choice(x.size, size=flip_count, replace=False)
    x[pos] = -x[pos]
    return x


def hamming(a, b) -> int:
    """Number of disagreeing neurons between two fully specified patterns."""
    xa = as_pattern(a, allow_unknown=False)
    xb = as_pattern(b, d=xa.size, allow_unknown=False)
    return int(np.sum(xa != xb))


def load_pattern_lines(lines, source: str = "<patterns>") -> np.ndarray:
    """Parse whitespace-separated +1/-1/0 rows into an (n, d) array."""
    rows = []
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            row = [float(tok) for tok in stripped.split()]
        except ValueError:
            raise ValueError(f"{source}:{lineno}: non-numeric entry") from None
        if any(v not in (-1.0, 0.0, 1.0) for v in row):
            raise ValueError(f"{source}:{lineno}: entries must be +1, -1 or 0")
        rows.append(row)
    if not rows:
        raise ValueError(f"{source}: no patterns found")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ValueError(f"{source}: inconsistent pattern lengths {sorted(widths)}")
    return np.array(rows)


def load_patterns(path) -> np.ndarray:
    """Load a pattern file: one pattern per line, entries +1/-1/0."""
    with open(path) as fh:
        return load_pattern_lines(fh, source=str(path))


def load_fasta(path) -> list[tuple[str, str]]:
    """Load (name, sequence) records from a FASTA file."""
    records: list[tuple[str, list[str]]] = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if line.startswith(">"):
                records.append((line[1:].strip(), []))
            else:
                if not records:
                    raise ValueError(f"{path}:{lineno}: sequence data before any '>' header")
                records[-1][1].append(line)
    if not records:
        raise ValueError(f"{path}: no FASTA records found")
    return [(name, "".join(chunks)) for name, chunks in records]
