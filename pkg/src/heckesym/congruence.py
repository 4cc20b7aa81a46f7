"""Congruence subgroups of the modular group (signature n = 3).

Cosets of Gamma_0(N) carry labels from P^1(Z/N); cosets of the plus-minus
image of Gamma_1(N) carry pairs (c, d) mod N with gcd(c, d, N) = 1, taken
up to simultaneous negation. A coset is the bottom row of any of its
representatives, and right multiplication acts on that row. Every label is
backed by an exact lift to SL_2(Z), so the induced-module cocycles are
honest integer matrices (signs included), not just projective classes.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .linalg import InternalInvariantError
from .rings import UnsupportedRingError, xgcd
from .triangle import TriangleSubgroup

SIGMA = (0, -1, 1, 0)
TAU = (1, -1, 1, 0)  # order 6 in SL_2(Z), order 3 projectively
IDENTITY = (1, 0, 0, 1)


def imat_mul(A, B):
    a, b, c, d = A
    e, f, g, h = B
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def imat_det(A):
    return A[0] * A[3] - A[1] * A[2]


def imat_inv(A):
    """Inverse of a determinant-1 integer matrix."""
    a, b, c, d = A
    return (d, -b, -c, a)


def imat_pow(A, e):
    out = IDENTITY
    if e < 0:
        A, e = imat_inv(A), -e
    while e:
        if e & 1:
            out = imat_mul(out, A)
        A = imat_mul(A, A)
        e >>= 1
    return out


def apply_moebius(A, x):
    """A acting on P^1(Q); x is a Fraction or None for infinity."""
    a, b, c, d = A
    if x is None:
        return None if c == 0 else Fraction(a, c)
    num = a * x + b
    den = c * x + d
    return None if den == 0 else Fraction(num, den)


# ---------------------------------------------------------------------------
# projective line over Z/N and (c,d)-pair labels
# ---------------------------------------------------------------------------


def p1_normalize(N, c, d):
    """Lexicographically least unit multiple of (c, d) mod N."""
    if N == 1:
        return (0, 0)
    c %= N
    d %= N
    best = None
    for u in range(1, N):
        if gcd(u, N) != 1:
            continue
        cand = (u * c % N, u * d % N)
        if best is None or cand < best:
            best = cand
    return best


def p1_list(N):
    """Canonical representatives of P^1(Z/N), sorted."""
    return _label_list(N, _p1_orbit)


def cd_pair_list(N):
    """Canonical (c, d) pairs mod simultaneous negation, sorted."""
    return _label_list(N, _pm_orbit)


def _p1_orbit(N, c, d):
    units = [u for u in range(1, N) if gcd(u, N) == 1] or [0]
    return {(u * c % N, u * d % N) for u in units} if N > 1 else {(0, 0)}

def _pm_orbit(N, c, d):
    return {(c % N, d % N), (-c % N, -d % N)}


def _label_list(N, orbit):
    labels = []
    seen = set()
    for c in range(N) if N > 1 else [0]:
        for d in range(N) if N > 1 else [0]:
            if N > 1 and gcd(gcd(c, d), N) != 1:
                continue
            if (c, d) in seen:
                continue
            orb = orbit(N, c, d)
            seen.update(orb)
            labels.append(min(orb))
    return sorted(labels)


def lift_to_sl2(c, d, N):
    """A matrix in SL_2(Z) with bottom row congruent to (c, d) mod N and
    determinant exactly 1. Deterministic; (0,1) lifts to the identity and
    (c,1) to a lower-triangular matrix."""
    if gcd(gcd(c, d), N) != 1:
        raise ValueError("(%d, %d) is not a projective point mod %d" % (c, d, N))
    if N == 1:
        return IDENTITY
    c %= N
    d %= N
    if (c, d) == (0, 1):
        return IDENTITY
    if d == 1:
        return (1, 0, c, 1)
    if c == 0:
        c = N
    dd = d
    cap = d + N * (c + 1)
    while gcd(c, dd) != 1:
        dd += N
        if dd > cap:
            raise InternalInvariantError("no coprime shift found for the lift")
    g, x, y = xgcd(c, dd)
    # y*dd + x*c = 1, so (y, -x; c, dd) has determinant one
    return (y, -x, c, dd)


# ---------------------------------------------------------------------------
# coset tables
# ---------------------------------------------------------------------------


class CongruenceCosets:
    """Coset table for a congruence subgroup, with exact lifts.

    kind "gamma0": labels are P^1(Z/N) points, the group is the projective
    image of Gamma_0(N). kind "gamma1": labels are (c,d) pairs modulo
    negation, the group is the projective image of Gamma_1(N).
    """

    def __init__(self, N, kind):
        if N < 1:
            raise ValueError("level must be positive")
        if kind not in ("gamma0", "gamma1"):
            raise ValueError(kind)
        self.N = N
        self.kind = kind
        self.n = 3
        self.labels = p1_list(N) if kind == "gamma0" else cd_pair_list(N)
        self.mu = len(self.labels)
        self.lifts = [lift_to_sl2(c, d, N) for c, d in self.labels]
        self._lookup = {}
        for idx, (c, d) in enumerate(self.labels):
            orbit = _p1_orbit(N, c, d) if kind == "gamma0" else _pm_orbit(N, c, d)
            for pair in orbit:
                self._lookup[pair] = idx
        s = tuple(self._act_perm(i, SIGMA) for i in range(self.mu))
        t = tuple(self._act_perm(i, TAU) for i in range(self.mu))
        self.subgroup = TriangleSubgroup(3, s, t)
        self._inv_lifts = [imat_inv(m) for m in self.lifts]

    def coset_of(self, c, d):
        try:
            return self._lookup[(c % self.N, d % self.N)]
        except KeyError:
            raise InternalInvariantError(
                "row (%d, %d) is not coprime to the level" % (c, d)
            )

    def coset_of_matrix(self, g):
        return self.coset_of(g[2], g[3])

    def _act_perm(self, i, g):
        c, d = self.labels[i]
        a, b, cc, dd = g
        return self.coset_of(c * a + d * cc, c * b + d * dd)

    def act(self, i, g):
        """Right action on coset i by g in SL_2(Z): returns (j, gamma) with
        gamma = lift_i * g * lift_j^{-1}, an exact element of the subgroup.

        For "gamma1" the pair labels only determine gamma up to sign, and we
        normalize into Gamma_1(N) proper (diagonal = 1 mod N, not -1). That
        choice is multiplicative, so the twisted action matrices of sigma
        and tau have honest orders 2 and 3 in every weight, odd included."""
        lifted = imat_mul(self.lifts[i], g)
        j = self.coset_of_matrix(lifted)
        gamma = imat_mul(lifted, self._inv_lifts[j])
        return j, self._normalize_member(gamma)

    def _normalize_member(self, gamma):
        if gamma[2] % self.N:
            raise InternalInvariantError("cocycle not congruent to upper triangular")
        if self.kind == "gamma1":
            if (gamma[0] - gamma[3]) % self.N:
                raise InternalInvariantError("cocycle not plus-minus unipotent")
            if (gamma[0] - 1) % self.N:
                gamma = (-gamma[0], -gamma[1], -gamma[2], -gamma[3])
                if (gamma[0] - 1) % self.N:
                    raise InternalInvariantError("cocycle diagonal is not a unit sign")
        return gamma

    def act_letter(self, i, letter, e=1):
        mat = SIGMA if letter == "s" else TAU
        return self.act(i, imat_pow(mat, e))

    def symbol_cocycle(self, g):
        """For a determinant-1 integer matrix g, the pair (j, gamma) with
        gamma = lift_j * g^(-1) in the subgroup. This rewrites the modular
        symbol {g.0, g.oo} as the coset-j generator twisted by gamma."""
        j = self.coset_of_matrix(g)
        gamma = imat_mul(self.lifts[j], imat_inv(g))
        return j, self._normalize_member(gamma)

    def __repr__(self):
        return "CongruenceCosets(N=%d, %s, mu=%d)" % (self.N, self.kind, self.mu)


def gamma0_cosets(N):
    return CongruenceCosets(N, "gamma0")


def gamma1_cosets(N):
    return CongruenceCosets(N, "gamma1")


def gamma0_subgroup(N):
    """The permutation presentation alone (no lifts)."""
    return gamma0_cosets(N).subgroup


def gamma1_subgroup(N):
    return gamma1_cosets(N).subgroup


# ---------------------------------------------------------------------------
# continued-fraction paths between cusps
# ---------------------------------------------------------------------------


def convergent_segments(x):
    """Unimodular chain from infinity to the rational x.

    Returns [(g, +1), ...] with each g in SL_2(Z); the k-th segment runs
    from the (k-1)-st convergent of x to the k-th (starting at infinity),
    via the matrix with the two convergents as columns, second column
    negated whenever that is needed to fix the determinant."""
    segs = []
    p_back, q_back = 0, 1  # convergent -2
    p_prev, q_prev = 1, 0  # convergent -1, the cusp at infinity
    rem = Fraction(x)
    while True:
        a = rem.numerator // rem.denominator
        p = a * p_prev + p_back
        q = a * q_prev + q_back
        g = (p, p_prev, q, q_prev)
        if imat_det(g) != 1:
            g = (p, -p_prev, q, -q_prev)
        if imat_det(g) != 1:
            raise InternalInvariantError("convergent matrix not unimodular")
        segs.append((g, 1))
        frac = rem - a
        if frac == 0:
            return segs
        rem = 1 / frac
        p_back, q_back, p_prev, q_prev = p_prev, q_prev, p, q


def _path_from_zero(x):
    """Chain from 0 to x (Fraction or None for infinity)."""
    if x is None:
        return [(IDENTITY, 1)]
    if x == 0:
        return []
    return [(IDENTITY, 1)] + convergent_segments(x)


def continued_fraction_path(alpha, beta):
    """A list of (g, sign) with sum sign * {g.0, g.oo} = {alpha, beta}.

    Endpoints are Fractions or None for infinity. Adjacent segments that
    cancel (same matrix, opposite sign) are removed."""
    chain = [(g, -s) for g, s in reversed(_path_from_zero(alpha))]
    chain += _path_from_zero(beta)
    out = []
    for g, s in chain:
        if out and out[-1][0] == g and out[-1][1] == -s:
            out.pop()
        else:
            out.append((g, s))
    return out


def segment_endpoints(g):
    """(g.0, g.oo) as Fractions / None."""
    a, b, c, d = g
    start = None if d == 0 else Fraction(b, d)
    end = None if c == 0 else Fraction(a, c)
    return start, end


# ---------------------------------------------------------------------------
# Hecke coset representatives
# ---------------------------------------------------------------------------


def hecke_representatives(p, N):
    """Determinant-p matrices for T_p (p coprime to N: p+1 of them) or
    U_p (p dividing N: p of them)."""
    reps = [(1, j, 0, p) for j in range(p)]
    if N % p:
        reps.append((p, 0, 0, 1))
    return reps


def diamond_matrix(d, N):
    """An SL_2(Z) lift of diag(d^-1, d) mod N, for d a unit mod N."""
    if gcd(d, N) != 1:
        raise UnsupportedRingError("diamond requires a unit mod the level")
    return lift_to_sl2(0, d, N)
