"""Digital (0,m,2)-nets and (0,2)-sequences over a prime base.

Point coordinates are built with the digital construction scheme: the
base-b digit vector of the point index is multiplied by a generating
matrix over Z_b for each coordinate.  Points carry exact integer
numerators over b**m next to their floating coordinates so that net
verification and interval membership never touch floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "GenMatrix",
    "DigitalNetSpec",
    "UnitSquarePointSet",
    "ScrambleState",
    "is_prime",
    "identity_matrix",
    "pascal_matrix",
    "identity_pascal_spec",
    "digital_net",
    "digital_sequence_prefix",
    "verify_net",
    "scramble_state",
    "scramble",
]

#: Largest supported number of points; numerators are stored in uint64.
MAX_POINTS = 2**63

#: Algorithm identifier of the PRNG used for scrambling, recorded in metadata.
SCRAMBLE_RNG = "numpy-pcg64"


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality test (fine at desk scale)."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _require_prime(b: int) -> None:
    if not is_prime(b):
        raise ValueError(f"base must be a prime number, got {b}")


def _require_width(b: int, m: int) -> None:
    if b**m > MAX_POINTS:
        raise OverflowError(
            f"b**m = {b}**{m} exceeds the supported 63-bit numerator width"
        )


@dataclass(frozen=True, eq=False)
class GenMatrix:
    """An m-by-m generating matrix with entries in Z_b."""

    b: int
    entries: np.ndarray

    def __post_init__(self):
        _require_prime(self.b)
        ent = np.ascontiguousarray(np.asarray(self.entries, dtype=np.int64))
        if ent.ndim != 2 or ent.shape[0] != ent.shape[1] or ent.shape[0] < 1:
            raise ValueError("generating matrix must be square and non-empty")
        if np.any(ent < 0) or np.any(ent >= self.b):
            raise ValueError(f"matrix entries must lie in [0, {self.b})")
        ent.setflags(write=False)
        object.__setattr__(self, "entries", ent)

    @property
    def m(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True, eq=False)
class DigitalNetSpec:
    """Base, exponent and the two generating matrices: the recipe for one net."""

    b: int
    m: int
    c1: GenMatrix
    c2: GenMatrix

    def __post_init__(self):
        _require_prime(self.b)
        if self.m < 1:
            raise ValueError("m must be >= 1")
        for c in (self.c1, self.c2):
            if c.b != self.b or c.m != self.m:
                raise ValueError("generating matrices must share the spec's b and m")


@dataclass(frozen=True, eq=False)
class UnitSquarePointSet:
    """N points of [0,1)^2 with exact numerators over b**m.

    ``numerators[k] = (u1, u2)`` encodes the point ``(u1 / b**m, u2 / b**m)``.
    ``m`` is the depth of the digit expansion (the denominator exponent); it
    may exceed the net exponent when the set is a slice of a deeper sequence.
    """

    b: int
    m: int
    numerators: np.ndarray

    def __post_init__(self):
        _require_prime(self.b)
        if self.m < 0:
            raise ValueError("depth m must be >= 0")
        _require_width(self.b, self.m)
        u = np.ascontiguousarray(np.asarray(self.numerators, dtype=np.uint64))
        if u.ndim != 2 or u.shape[1] != 2 or u.shape[0] < 1:
            raise ValueError("numerators must be a non-empty (N, 2) array")
        if np.any(u >= np.uint64(self.b**self.m)):
            raise ValueError("numerators must be < b**m")
        u.setflags(write=False)
        object.__setattr__(self, "numerators", u)

    def __len__(self) -> int:
        return self.numerators.shape[0]

    @property
    def denominator(self) -> int:
        return self.b**self.m

    @property
    def coords(self) -> np.ndarray:
        """Floating coordinates, exactly numerators / b**m (no extra rounding)."""
        return self.numerators.astype(np.float64) / np.float64(self.denominator)

    def digit_matrix(self, coord: int) -> np.ndarray:
        """Digits of coordinate ``coord`` (0 or 1), most significant first, shape (m, N)."""
        u = self.numerators[:, coord].astype(np.uint64)
        out = np.empty((self.m, len(self)), dtype=np.int64)
        rem = u.copy()
        for r in range(self.m - 1, -1, -1):
            out[r] = (rem % np.uint64(self.b)).astype(np.int64)
            rem //= np.uint64(self.b)
        return out


def identity_matrix(b: int, m: int) -> GenMatrix:
    """The m-by-m identity over Z_b."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return GenMatrix(b, np.eye(m, dtype=np.int64))


def pascal_matrix(b: int, m: int) -> GenMatrix:
    """Upper-triangular matrix of binomial coefficients C(col, row) mod b.

    Together with the identity matrix this pair generates the classical
    two-dimensional low-discrepancy net over Z_b.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    ent = np.zeros((m, m), dtype=np.int64)
    for j in range(m):
        for i in range(j + 1):
            ent[i, j] = math.comb(j, i) % b
    return GenMatrix(b, ent)


def identity_pascal_spec(b: int, m: int) -> DigitalNetSpec:
    """Net recipe with C1 = identity and C2 = Pascal (the classical pair)."""
    return DigitalNetSpec(b, m, identity_matrix(b, m), pascal_matrix(b, m))


def _index_digits(b: int, m: int, indices: np.ndarray) -> np.ndarray:
    """Base-b digits of each index, least significant first, shape (m, count)."""
    digits = np.empty((m, indices.size), dtype=np.int64)
    rem = indices.astype(np.uint64)
    for k in range(m):
        digits[k] = (rem % np.uint64(b)).astype(np.int64)
        rem = rem // np.uint64(b)
    return digits


def _digit_weights(b: int, m: int) -> np.ndarray:
    # weight of digit row r (most significant first) is b**(m-1-r)
    return np.array([b ** (m - 1 - r) for r in range(m)], dtype=np.uint64)


def _numerators_from_digits(b: int, digits: np.ndarray) -> np.ndarray:
    m = digits.shape[0]
    w = _digit_weights(b, m)
    return (digits.astype(np.uint64) * w[:, None]).sum(axis=0, dtype=np.uint64)


def _generate(spec: DigitalNetSpec, indices: np.ndarray) -> np.ndarray:
    """Numerators (count, 2) of the digital points at the given indices."""
    b, m = spec.b, spec.m
    if b == 2:
        # XOR fast path: column j of C_i, read most-significant-digit-first,
        # packed into one integer mask.
        w = _digit_weights(2, m)
        out = np.empty((indices.size, 2), dtype=np.uint64)
        for coord, c in enumerate((spec.c1, spec.c2)):
            masks = (c.entries.astype(np.uint64) * w[:, None]).sum(
                axis=0, dtype=np.uint64
            )
            u = np.zeros(indices.size, dtype=np.uint64)
            for j in range(m):
                bit = (indices >> np.uint64(j)) & np.uint64(1)
                u ^= bit * masks[j]
            out[:, coord] = u
        return out
    digits = _index_digits(b, m, indices)
    out = np.empty((indices.size, 2), dtype=np.uint64)
    for coord, c in enumerate((spec.c1, spec.c2)):
        y = (c.entries @ digits) % b
        out[:, coord] = _numerators_from_digits(b, y)
    return out


def digital_net(spec: DigitalNetSpec) -> UnitSquarePointSet:
    """All b**m points of the digital net, in index order n = 0, ..., b**m - 1.

    Raises
    ------
    OverflowError
        If b**m exceeds the supported 63-bit numerator width.
    """
    _require_width(spec.b, spec.m)
    n = np.arange(spec.b**spec.m, dtype=np.uint64)
    return UnitSquarePointSet(spec.b, spec.m, _generate(spec, n))


def digital_sequence_prefix(b: int, count: int, depth: int) -> UnitSquarePointSet:
    """First ``count`` points of the identity/Pascal digital sequence.

    ``depth`` fixes the digit expansion: points are returned with exact
    numerators over b**depth.  For ``count = b**m`` and ``depth = m`` the
    result equals ``digital_net(identity_pascal_spec(b, m))``.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    _require_width(b, depth)
    if count > b**depth:
        raise ValueError(f"depth {depth} supports at most {b}**{depth} points")
    n = np.arange(count, dtype=np.uint64)
    return UnitSquarePointSet(b, depth, _generate(identity_pascal_spec(b, depth), n))


def verify_net(points: UnitSquarePointSet, m: int) -> bool:
    """Check the net axiom with exact integer arithmetic.

    True iff for every split d1 + d2 = m each elementary interval
    [a1/b**d1, (a1+1)/b**d1) x [a2/b**d2, (a2+1)/b**d2) contains exactly one
    point.  The point set must hold exactly b**m points and its digit depth
    must be at least m.

    Raises
    ------
    ValueError
        If the number of points is not b**m or the depth is insufficient.
    """
    b = points.b
    if m < 0:
        raise ValueError("m must be >= 0")
    if len(points) != b**m:
        raise ValueError(f"point count {len(points)} does not equal {b}**{m}")
    if points.m < m:
        raise ValueError(f"depth {points.m} too small to verify a net with m = {m}")
    u1 = points.numerators[:, 0]
    u2 = points.numerators[:, 1]
    for d1 in range(m + 1):
        d2 = m - d1
        q1 = np.uint64(b ** (points.m - d1))
        q2 = np.uint64(b ** (points.m - d2))
        boxes = (u1 // q1) * np.uint64(b**d2) + (u2 // q2)
        counts = np.bincount(boxes.astype(np.int64), minlength=b**m)
        if counts.size != b**m or np.any(counts != 1):
            return False
    return True


@dataclass(frozen=True, eq=False)
class ScrambleState:
    """Seeded random linear scramble: lower-triangular matrices plus digit shifts.

    ``l1``/``l2`` are nonsingular lower-triangular matrices over Z_b acting
    on most-significant-first digit vectors, ``shift1``/``shift2`` are digit
    shift vectors.  Identical seeds reproduce identical state.
    """

    b: int
    m: int
    seed: int
    l1: np.ndarray
    l2: np.ndarray
    shift1: np.ndarray
    shift2: np.ndarray
    algorithm: str = field(default=SCRAMBLE_RNG)

    def __post_init__(self):
        _require_prime(self.b)
        for l in (self.l1, self.l2):
            if l.shape != (self.m, self.m):
                raise ValueError("scramble matrices must be m x m")
            if np.any(np.triu(l, k=1) != 0):
                raise ValueError("scramble matrices must be lower-triangular")
            if np.any(np.diag(l) % self.b == 0):
                raise ValueError("scramble matrices must have nonzero diagonal mod b")
        for s in (self.shift1, self.shift2):
            if s.shape != (self.m,):
                raise ValueError("digit shifts must have length m")


def scramble_state(
    b: int, m: int, seed: int, *, digital_shift: bool = True
) -> ScrambleState:
    """Draw a scramble state from the seeded PCG64 generator.

    With ``digital_shift=False`` the shifts are zero; the scramble then fixes
    the origin, which keeps the lifted north-pole point consistent with its
    unit-square pre-image.
    """
    rng = np.random.Generator(np.random.PCG64(seed))

    def lower(_):
        strict = np.tril(rng.integers(0, b, size=(m, m), dtype=np.int64), k=-1)
        diag = np.diag(rng.integers(1, b, size=m, dtype=np.int64)) if b > 1 else 0
        return strict + diag

    l1, l2 = lower(0), lower(1)
    if digital_shift:
        shift1 = rng.integers(0, b, size=m, dtype=np.int64)
        shift2 = rng.integers(0, b, size=m, dtype=np.int64)
    else:
        shift1 = np.zeros(m, dtype=np.int64)
        shift2 = np.zeros(m, dtype=np.int64)
    return ScrambleState(b, m, seed, l1, l2, shift1, shift2)


def scramble(points: UnitSquarePointSet, state: ScrambleState) -> UnitSquarePointSet:
    """Apply the linear scramble digitwise: y -> (L y + shift) mod b.

    A nonsingular lower-triangular scramble maps any (0,m,2)-net to another
    (0,m,2)-net, so the output passes :func:`verify_net` whenever the input
    does.  Deterministic in the state's seed.

    Raises
    ------
    ValueError
        On base or depth mismatch between points and state.
    """
    if state.b != points.b or state.m != points.m:
        raise ValueError("scramble state and point set disagree on b or m")
    b, m = points.b, points.m
    out = np.empty((len(points), 2), dtype=np.uint64)
    for coord, (l, shift) in enumerate(
        ((state.l1, state.shift1), (state.l2, state.shift2))
    ):
        y = points.digit_matrix(coord)
        y = (l @ y + shift[:, None]) % b
        out[:, coord] = _numerators_from_digits(b, y)
    return UnitSquarePointSet(b, m, out)
