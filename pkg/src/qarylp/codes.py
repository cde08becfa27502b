"""Linear codes over the ring of integers mod q.

Symbols live in Z_q = {0, ..., q-1}.  A nonzero symbol a is embedded as the
indicator vector of length q-1 with a one in slot a-1; the zero symbol maps
to the all-zero vector.  A parity-check matrix H over Z_q defines one
single-parity-check (SPC) constraint per row: sum_i c_i * H[j, i] = 0 (mod q).
This module provides the symbol/indicator arithmetic, the Tanner-graph view
of H (check supports, variable supports, edge list), local SPC codebook
enumeration, a bundled [80, 48] benchmark code over Z_4, and a plain-text
check-matrix file format.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field

import numpy as np


class MalformedIndicator(ValueError):
    """Vector is not a valid symbol indicator (entries not 0/1 or sum > 1)."""


class LengthMismatch(ValueError):
    """Word length does not match the code length."""


class ParseError(ValueError):
    """Check-matrix file is malformed; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


# ---- Ring symbols and indicator embeddings ----


@dataclass(frozen=True)
class RingSymbol:
    """An element of Z_q, with arithmetic mod q."""

    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {self.modulus}")
        if not 0 <= self.value < self.modulus:
            raise ValueError(
                f"value {self.value} outside Z_{self.modulus}"
            )

    def _check(self, other: "RingSymbol") -> None:
        if self.modulus != other.modulus:
            raise ValueError(
                f"modulus mismatch: {self.modulus} vs {other.modulus}"
            )

    def __add__(self, other: "RingSymbol") -> "RingSymbol":
        self._check(other)
        return RingSymbol((self.value + other.value) % self.modulus, self.modulus)

    def __sub__(self, other: "RingSymbol") -> "RingSymbol":
        self._check(other)
        return RingSymbol((self.value - other.value) % self.modulus, self.modulus)

    def __mul__(self, other: "RingSymbol") -> "RingSymbol":
        self._check(other)
        return RingSymbol((self.value * other.value) % self.modulus, self.modulus)

    def __neg__(self) -> "RingSymbol":
        return RingSymbol((-self.value) % self.modulus, self.modulus)

    def __int__(self) -> int:
        return self.value

    @classmethod
    def elements(cls, modulus: int) -> tuple["RingSymbol", ...]:
        """All elements of Z_modulus in ascending order."""
        return tuple(cls(v, modulus) for v in range(modulus))


def indicator(symbol: RingSymbol | int, q: int | None = None) -> np.ndarray:
    """Indicator embedding of a symbol: length q-1, slot a-1 set for a != 0.

    Accepts a RingSymbol, or a plain int together with q.
    """
    if isinstance(symbol, RingSymbol):
        a, q = symbol.value, symbol.modulus
    else:
        if q is None:
            raise ValueError("q is required when symbol is a plain int")
        a = int(symbol)
        if not 0 <= a < q:
            raise ValueError(f"symbol {a} outside Z_{q}")
    vec = np.zeros(q - 1, dtype=np.int64)
    if a != 0:
        vec[a - 1] = 1
    return vec


def symbol_from_indicator(vec) -> RingSymbol:
    """Invert the indicator embedding; the modulus is len(vec) + 1.

    Raises MalformedIndicator unless entries are 0/1 with at most one 1.
    """
    arr = np.asarray(vec)
    if arr.ndim != 1 or arr.size < 1:
        raise MalformedIndicator(f"expected a 1-d vector, got shape {arr.shape}")
    q = arr.size + 1
    ones = np.flatnonzero(arr == 1)
    if ones.size + np.count_nonzero(arr == 0) != arr.size:
        raise MalformedIndicator(f"entries must be 0 or 1, got {arr.tolist()}")
    if ones.size > 1:
        raise MalformedIndicator(f"more than one slot set: {arr.tolist()}")
    value = int(ones[0]) + 1 if ones.size == 1 else 0
    return RingSymbol(value, q)


def indicator_block(word, q: int) -> np.ndarray:
    """Stack indicator embeddings of a word: shape (len(word), q-1)."""
    w = np.asarray(word, dtype=np.int64)
    if np.any((w < 0) | (w >= q)):
        raise ValueError(f"word entries outside Z_{q}: {w.tolist()}")
    block = np.zeros((w.size, q - 1), dtype=np.int64)
    nz = np.flatnonzero(w)
    block[nz, w[nz] - 1] = 1
    return block


# ---- Tanner-graph view of a parity-check matrix ----


@dataclass(frozen=True)
class TannerCode:
    """A parity-check matrix over Z_q as a Tanner graph.

    rows[j] lists the (column, value) pairs of check j, columns 0-based and
    sorted ascending, values in 1..q-1.  Every check must touch at least two
    columns: a degree-1 check pins a single symbol and is rejected.
    """

    q: int
    n: int
    rows: tuple[tuple[tuple[int, int], ...], ...]

    # derived structure, not part of equality
    row_cols: tuple = field(default=None, compare=False, repr=False)
    row_vals: tuple = field(default=None, compare=False, repr=False)
    columns: tuple = field(default=None, compare=False, repr=False)
    edges: tuple = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.q < 2:
            raise ValueError(f"q must be >= 2, got {self.q}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        norm = []
        for j, row in enumerate(self.rows):
            pairs = sorted((int(i), int(v)) for i, v in row)
            if len(pairs) < 2:
                raise ValueError(
                    f"check {j} has degree {len(pairs)}; degree >= 2 required"
                )
            cols = [i for i, _ in pairs]
            if len(set(cols)) != len(cols):
                raise ValueError(f"check {j} repeats a column")
            for i, v in pairs:
                if not 0 <= i < self.n:
                    raise ValueError(f"check {j}: column {i} outside 0..{self.n - 1}")
                if not 1 <= v < self.q:
                    raise ValueError(f"check {j}: value {v} outside 1..{self.q - 1}")
            norm.append(tuple(pairs))
        object.__setattr__(self, "rows", tuple(norm))
        object.__setattr__(
            self, "row_cols",
            tuple(np.array([i for i, _ in row], dtype=np.int64) for row in self.rows),
        )
        object.__setattr__(
            self, "row_vals",
            tuple(np.array([v for _, v in row], dtype=np.int64) for row in self.rows),
        )
        cols: list[list[int]] = [[] for _ in range(self.n)]
        edges = []
        for j, row in enumerate(self.rows):
            for i, _ in row:
                cols[i].append(j)
                edges.append((i, j))
        object.__setattr__(self, "columns", tuple(tuple(c) for c in cols))
        object.__setattr__(self, "edges", tuple(edges))

    @property
    def m(self) -> int:
        return len(self.rows)

    @classmethod
    def from_dense(cls, H, q: int) -> "TannerCode":
        """Build from a dense (m, n) integer matrix; zeros are absent edges."""
        H = np.asarray(H)
        rows = tuple(
            tuple((int(i), int(H[j, i])) for i in np.flatnonzero(H[j]))
            for j in range(H.shape[0])
        )
        return cls(q=q, n=H.shape[1], rows=rows)

    def dense(self) -> np.ndarray:
        """The (m, n) parity-check matrix as a dense integer array."""
        H = np.zeros((self.m, self.n), dtype=np.int64)
        for j, row in enumerate(self.rows):
            for i, v in row:
                H[j, i] = v
        return H

    def syndrome(self, word) -> np.ndarray:
        """Per-check residuals sum_i c_i H[j,i] mod q, shape (m,)."""
        w = np.asarray(word, dtype=np.int64)
        if w.shape != (self.n,):
            raise LengthMismatch(f"expected length {self.n}, got shape {w.shape}")
        out = np.empty(self.m, dtype=np.int64)
        for j in range(self.m):
            out[j] = int(np.dot(w[self.row_cols[j]], self.row_vals[j])) % self.q
        return out

    def is_codeword(self, word) -> bool:
        return not np.any(self.syndrome(word))


@dataclass(frozen=True)
class SpcCodebook:
    """All local solutions of one check, one word per row of `words`."""

    check: int
    words: np.ndarray

    def __len__(self) -> int:
        return self.words.shape[0]


def enumerate_spc(code: TannerCode, j: int) -> SpcCodebook:
    """Enumerate the local codebook of check j.

    Words are tuples b over Z_q of length d_j with sum_t b_t * H[j, i_t] = 0
    mod q, listed in lexicographic order.  The search fixes the first d_j - 1
    symbols and completes the last one; a non-unit last coefficient can admit
    zero or several completions per prefix, all of which are emitted.
    """
    vals = code.row_vals[j]
    q, d = code.q, len(vals)
    last = int(vals[-1])
    # completions of v*b = r mod q, precomputed per residue r
    completions = [[b for b in range(q) if (last * b - r) % q == 0] for r in range(q)]
    head = vals[:-1]
    words = []
    for prefix in itertools.product(range(q), repeat=d - 1):
        need = (-int(np.dot(prefix, head))) % q
        for b in completions[need]:
            words.append(prefix + (b,))
    return SpcCodebook(check=j, words=np.array(words, dtype=np.int16))


# ---- Code constructions ----

_LDPC80_OFFSETS = ((0, 1), (8, 3), (25, 3), (41, 1), (48, 1))


def ldpc80_z4() -> TannerCode:
    """The bundled [80, 48] rate-0.6 LDPC code over Z_4.

    Check j (0-based) touches columns j + 0, 8, 25, 41, 48 with coefficients
    1, 3, 3, 1, 1; the band never wraps, so column offsets stay in range for
    all 32 checks and every column is covered.  All checks have degree 5.
    """
    rows = tuple(
        tuple((j + off, v) for off, v in _LDPC80_OFFSETS) for j in range(32)
    )
    return TannerCode(q=4, n=80, rows=rows)


def random_regular_code(
    n: int,
    m: int,
    row_degree: int,
    q: int,
    rng: np.random.Generator,
    unit_entries: bool = True,
) -> TannerCode:
    """A random code with constant check degree and every column covered.

    With unit_entries=True coefficients are drawn from the units of Z_q, so
    every symbol value remains locally reachable at every edge.
    """
    slots = m * row_degree
    if slots < n:
        raise ValueError(f"m * row_degree = {slots} cannot cover {n} columns")
    if n < row_degree:
        raise ValueError("row_degree exceeds the number of columns")
    if unit_entries:
        values = [v for v in range(1, q) if math.gcd(v, q) == 1]
    else:
        values = list(range(1, q))
    while True:
        pool = list(range(n)) + [int(rng.integers(n)) for _ in range(slots - n)]
        rng.shuffle(pool)
        rows_cols = [pool[k * row_degree:(k + 1) * row_degree] for k in range(m)]
        if all(len(set(r)) == row_degree for r in rows_cols):
            break
    rows = tuple(
        tuple((i, int(rng.choice(values))) for i in sorted(r)) for r in rows_cols
    )
    return TannerCode(q=q, n=n, rows=rows)


# ---- Check-matrix file format ----
#
#   n m q
#   max_col_degree max_row_degree
#   <n lines: column degrees>
#   <m lines: row degrees>
#   <m lines: one check per line as 1-based "col:val" pairs>
#
# '#' starts a comment, blank lines are skipped, whitespace is free-form.

_PAIR_RE = re.compile(r"^(\d+):(\d+)$")


def _logical_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield lineno, body.split()


def _take(lines, count, what):
    out = []
    for _ in range(count):
        try:
            out.append(next(lines))
        except StopIteration:
            raise ParseError(f"file ended early, expected {what}") from None
    return out


def _ints(tokens, lineno, what):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"expected integers for {what}, got {tokens}", lineno) from None


def read_check_matrix(path) -> TannerCode:
    """Parse a check-matrix file; see the module-level format notes."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    lines = iter(list(_logical_lines(text)))

    (ln, toks), = _take(lines, 1, "the 'n m q' header")
    if len(toks) != 3:
        raise ParseError(f"expected 'n m q', got {' '.join(toks)}", ln)
    n, m, q = _ints(toks, ln, "the header")
    if n < 1 or m < 1 or q < 2:
        raise ParseError(f"bad dimensions n={n} m={m} q={q}", ln)

    (ln, toks), = _take(lines, 1, "the degree header")
    if len(toks) != 2:
        raise ParseError(f"expected 'max_col_deg max_row_deg', got {' '.join(toks)}", ln)
    max_col, max_row = _ints(toks, ln, "the degree header")

    col_deg = []
    for ln, toks in _take(lines, n, f"{n} column degrees"):
        if len(toks) != 1:
            raise ParseError(f"expected one column degree, got {' '.join(toks)}", ln)
        col_deg.append(_ints(toks, ln, "a column degree")[0])
    row_deg = []
    for ln, toks in _take(lines, m, f"{m} row degrees"):
        if len(toks) != 1:
            raise ParseError(f"expected one row degree, got {' '.join(toks)}", ln)
        row_deg.append(_ints(toks, ln, "a row degree")[0])

    rows = []
    seen_col_deg = [0] * n
    for j, (ln, toks) in enumerate(_take(lines, m, f"{m} check lines")):
        pairs = []
        for tok in toks:
            match = _PAIR_RE.match(tok)
            if not match:
                raise ParseError(f"check {j + 1}: bad pair {tok!r}", ln)
            i, v = int(match.group(1)), int(match.group(2))
            if not 1 <= i <= n:
                raise ParseError(f"check {j + 1}: column {i} outside 1..{n}", ln)
            if v >= q:
                raise ValueError(f"line {ln}: check {j + 1}: value {v} >= q = {q}")
            if v < 1:
                raise ParseError(f"check {j + 1}: value {v} outside 1..{q - 1}", ln)
            pairs.append((i - 1, v))
        if len(pairs) < 2:
            raise ParseError(f"check {j + 1} has degree {len(pairs)}; need >= 2", ln)
        if len({i for i, _ in pairs}) != len(pairs):
            raise ParseError(f"check {j + 1} repeats a column", ln)
        if len(pairs) != row_deg[j]:
            raise ParseError(
                f"check {j + 1} has {len(pairs)} pairs, declared {row_deg[j]}", ln
            )
        for i, _ in pairs:
            seen_col_deg[i] += 1
        rows.append(tuple(pairs))

    for ln, toks in lines:
        raise ParseError(f"unexpected trailing content: {' '.join(toks)}", ln)
    if seen_col_deg != col_deg:
        bad = next(i for i in range(n) if seen_col_deg[i] != col_deg[i])
        raise ParseError(
            f"column {bad + 1} degree is {seen_col_deg[bad]}, declared {col_deg[bad]}"
        )
    if max(col_deg) != max_col or max(row_deg) != max_row:
        raise ParseError(
            f"declared maxima ({max_col}, {max_row}) do not match "
            f"actual ({max(col_deg)}, {max(row_deg)})"
        )
    return TannerCode(q=q, n=n, rows=tuple(rows))


def write_check_matrix(code: TannerCode, path) -> None:
    """Serialize a code in the check-matrix format; 1-based columns."""
    col_deg = [len(code.columns[i]) for i in range(code.n)]
    row_deg = [len(row) for row in code.rows]
    out = [
        f"{code.n} {code.m} {code.q}",
        f"{max(col_deg)} {max(row_deg)}",
    ]
    out.extend(str(d) for d in col_deg)
    out.extend(str(d) for d in row_deg)
    for row in code.rows:
        out.append(" ".join(f"{i + 1}:{v}" for i, v in row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(out) + "\n")
