"""Modular symbol spaces for finite-index subgroups of Hecke triangle groups.

A subgroup of index mu, given either as a congruence coset table (with exact
integer lifts) or as a permutation pair, induces a module of rank
mu * (k - 1) over the coefficient ring: one block per right coset, one
coordinate per basis monomial of the weight action. The two group generators
act on the right through block-permutation matrices built from Schreier
cocycles. Modular symbols are the quotient by the sigma- and tau-norm
relations; the boundary space is the quotient by the translation relations,
and the boundary map sends a symbol to the difference of its endpoints.
Cuspidal and Eisenstein parts are its kernel and image.
"""

from collections import namedtuple

from .congruence import CongruenceCosets, continued_fraction_path, imat_inv
from .linalg import FPMap, FPModule, Matrix, left_kernel, matrix_rank
from .rings import UnsupportedRingError
from .triangle import (
    integral_lambda_ring,
    mat2_inv_det_one,
    psl_canonical,
    reduce_word,
    word_inverse,
)
from .weights import WeightModule


Cocycle = namedtuple("Cocycle", ["matrix", "word"])

Subspace = namedtuple("Subspace", ["module", "ambient_rows"])


class PermCosets:
    """Coset-table view of a permutation-presented triangle subgroup.

    Cocycles come back as exact 2x2 matrices over Z[lam], sign-canonicalized,
    together with the reduced word realizing them, so both the polynomial
    and the generic weight actions can consume them.
    """

    def __init__(self, group):
        self.group = group
        self.subgroup = group
        self.n = group.n
        self.mu = group.mu
        self.ring, self.lam = integral_lambda_ring(group.n)

    def twist(self, i, letter, e=1):
        """(j, cocycle of the inverse Schreier element) for coset i under
        letter^e; the cocycle is exactly what multiplies the coefficient."""
        word = ((letter, e),)
        gam, j = self.group.cocycle_matrix(self.ring, self.lam, i, word)
        wrd, _ = self.group.cocycle_word(i, word)
        inv_word = reduce_word(self.n, word_inverse(wrd))
        inv_mat = psl_canonical(self.ring, mat2_inv_det_one(self.ring, gam))
        return j, Cocycle(inv_mat, inv_word)

    def stabilizer_cocycle(self, cls):
        """Generator of the stabilizer of an elliptic class, as a cocycle."""
        word = (("s", 1),) if cls.kind == "sigma" else (("t", cls.power),)
        gam, j = self.group.cocycle_matrix(self.ring, self.lam, cls.coset, word)
        if j != cls.coset:
            raise UnsupportedRingError("elliptic class does not fix its coset")
        wrd, _ = self.group.cocycle_word(cls.coset, word)
        return Cocycle(gam, wrd)

    def __repr__(self):
        return "PermCosets(n=%d, mu=%d)" % (self.n, self.mu)


def weight_module_for(cosets, ring, k):
    """The weight action flavor matching the coset table: sign-normalized
    SL2 matrices for congruence tables (so odd weights make sense when the
    subgroup misses -1), plain projective matrices for permutation tables."""
    if isinstance(cosets, CongruenceCosets):
        return WeightModule(ring, k, variant="plus-minus-one")
    return WeightModule(ring, k, variant="projective")


class InducedModule:
    """The coefficient module induced along a coset table.

    Coordinates come in mu blocks of size weight.dim, one block per coset,
    stored row-major. Group elements act on the right via block-permutation
    matrices: coset i is carried to coset j while the coefficient picks up
    the action of the inverse Schreier cocycle. The generator actions are
    validated to have orders 2 and n; that fails exactly when the weight
    cannot act through the projective group (for instance odd weight over a
    subgroup containing minus the identity), which is reported as an
    unsupported combination.
    """

    def __init__(self, cosets, weight):
        self.cosets = cosets
        self.weight = weight
        self.ring = weight.ring
        self.n = cosets.n
        self.mu = cosets.mu
        self.block = weight.dim
        self.rank = self.mu * self.block
        self._letter_cache = {}
        self._dense_cache = {}
        sig = self._letter("s")
        if not self._is_identity(self._compose(sig, sig)):
            raise UnsupportedRingError(
                "sigma does not act with order 2 on the induced module; the "
                "weight twist is incompatible with these cosets"
            )
        tau = self._letter("t")
        acc = tau
        for _ in range(self.n - 1):
            acc = self._compose(acc, tau)
        if not self._is_identity(acc):
            raise UnsupportedRingError(
                "tau does not act with order %d on the induced module; the "
                "weight twist is incompatible with these cosets" % self.n
            )

    # -- block maps: [(j, B)] with (i (x) v) * g = (j (x) v B) row-wise ----

    def _twist(self, i, letter, e):
        cosets = self.cosets
        if isinstance(cosets, CongruenceCosets):
            j, gamma = cosets.act_letter(i, letter, e)
            return j, Cocycle(imat_inv(gamma), None)
        return cosets.twist(i, letter, e)

    def _letter(self, letter, e=1):
        key = (letter, e)
        bm = self._letter_cache.get(key)
        if bm is None:
            bm = []
            for i in range(self.mu):
                j, coc = self._twist(i, letter, e)
                bm.append((j, self.weight.action_for(coc, self.n).transpose()))
            self._letter_cache[key] = bm
        return bm

    @staticmethod
    def _compose(first, then):
        """Block map of 'first, then then' (right actions compose in order)."""
        return [(then[j][0], B.mul(then[j][1])) for j, B in first]

    def _is_identity(self, bm):
        ident = Matrix.identity(self.ring, self.block)
        return all(j == i and B == ident for i, (j, B) in enumerate(bm))

    def _dense(self, bm):
        zero = self.ring.zero
        blk = self.block
        rows = [[zero] * self.rank for _ in range(self.rank)]
        for i, (j, B) in enumerate(bm):
            for a in range(blk):
                rows[i * blk + a][j * blk : (j + 1) * blk] = B.rows[a]
        return Matrix(self.ring, rows, self.rank)

    # -- dense operators ----------------------------------------------------

    def _blockmap(self, name):
        if name == "s" or name == "t":
            return self._letter(name)
        if name == "T":
            bm = self._letter_cache.get(("T", 1))
            if bm is None:
                bm = self._compose(self._letter("t"), self._letter("s"))
                self._letter_cache[("T", 1)] = bm
            return bm
        raise ValueError(name)

    def right_matrix(self, name):
        """Dense matrix of the right action of sigma ("s"), tau ("t") or the
        translation T = tau sigma ("T")."""
        out = self._dense_cache.get(name)
        if out is None:
            out = self._dense(self._blockmap(name))
            self._dense_cache[name] = out
        return out

    def right_difference(self, name):
        """Dense matrix of (identity - right action), assembled block-wise."""
        key = "D" + name
        out = self._dense_cache.get(key)
        if out is None:
            ring = self.ring
            blk = self.block
            zero, one, neg, add = ring.zero, ring.one, ring.neg, ring.add
            rows = [[zero] * self.rank for _ in range(self.rank)]
            for i, (j, B) in enumerate(self._blockmap(name)):
                for a in range(blk):
                    rows[i * blk + a][j * blk : (j + 1) * blk] = [
                        neg(x) for x in B.rows[a]
                    ]
            for r in range(self.rank):
                rows[r][r] = add(rows[r][r], one)
            out = Matrix(ring, rows, self.rank)
            self._dense_cache[key] = out
        return out

    def norm_matrix(self, letter):
        """Sum of the right actions of the powers of a generator."""
        key = "N" + letter
        out = self._dense_cache.get(key)
        if out is None:
            order = 2 if letter == "s" else self.n
            step = self._letter(letter)
            blk = self.block
            ident = Matrix.identity(self.ring, blk)
            acc = [(i, ident) for i in range(self.mu)]
            sums = [{} for _ in range(self.mu)]
            for m in range(order):
                for i, (j, B) in enumerate(acc):
                    cur = sums[i].get(j)
                    sums[i][j] = B if cur is None else cur.add(B)
                if m < order - 1:
                    acc = self._compose(acc, step)
            zero = self.ring.zero
            rows = [[zero] * self.rank for _ in range(self.rank)]
            for i, blocks in enumerate(sums):
                for j, B in blocks.items():
                    for a in range(blk):
                        rows[i * blk + a][j * blk : (j + 1) * blk] = B.rows[a]
            out = Matrix(self.ring, rows, self.rank)
            self._dense_cache[key] = out
        return out

    def norm_kernel(self, letter):
        """Basis of the row vectors killed by a generator norm. These are
        the admissible cocycle values on that generator."""
        key = "K" + letter
        out = self._dense_cache.get(key)
        if out is None:
            out = left_kernel(self.norm_matrix(letter))
            self._dense_cache[key] = out
        return out

    def fixed_vectors(self, name):
        """Basis of the vectors fixed by the right action of "s", "t" or
        the translation "T"."""
        key = "F" + name
        out = self._dense_cache.get(key)
        if out is None:
            out = left_kernel(self.right_difference(name))
            self._dense_cache[key] = out
        return out

    def group_fixed_vectors(self):
        """Basis of the vectors fixed by the whole group action."""
        out = self._dense_cache.get("FG")
        if out is None:
            joint = self.right_difference("s").hstack(self.right_difference("t"))
            out = left_kernel(joint)
            self._dense_cache["FG"] = out
        return out

    def operator_rank(self, key, build):
        """Cached rank of a derived operator matrix; `build` is only called
        on a cache miss."""
        k = "rank:" + key
        out = self._dense_cache.get(k)
        if out is None:
            out = matrix_rank(build())
            self._dense_cache[k] = out
        return out

    def apply_letter_to_row(self, vec, letter, e=1):
        """Row vector (plain list) times the right action of letter^e."""
        bm = self._letter(letter, e)
        blk = self.block
        out = [self.ring.zero] * self.rank
        for i, (j, B) in enumerate(bm):
            out[j * blk : (j + 1) * blk] = B.act_on_row(vec[i * blk : (i + 1) * blk])
        return out

    def right_operator(self, g):
        """Dense right action of an arbitrary determinant-1 integer matrix.

        Only congruence tables carry enough structure for this; it backs the
        diamond operators and the symbol-invariance checks."""
        if not isinstance(self.cosets, CongruenceCosets):
            raise UnsupportedRingError(
                "matrix right actions need a congruence coset table"
            )
        bm = []
        for i in range(self.mu):
            j, gamma = self.cosets.act(i, g)
            coc = Cocycle(imat_inv(gamma), None)
            bm.append((j, self.weight.action_for(coc, self.n).transpose()))
        return self._dense(bm)

    def stabilizer_action(self, cls):
        """Action matrix on the weight module of the stabilizer generator of
        an elliptic class (columns = images of basis monomials)."""
        if isinstance(self.cosets, CongruenceCosets):
            from .congruence import SIGMA, TAU, imat_pow

            mat = SIGMA if cls.kind == "sigma" else imat_pow(TAU, cls.power)
            j, gamma = self.cosets.act(cls.coset, mat)
            if j != cls.coset:
                raise UnsupportedRingError("elliptic class does not fix its coset")
            coc = Cocycle(gamma, None)
        else:
            coc = self.cosets.stabilizer_cocycle(cls)
        return self.weight.action_for(coc, self.n)

    def __repr__(self):
        return "InducedModule(mu=%d, block=%d, %s)" % (
            self.mu,
            self.block,
            self.ring.kind,
        )


class ManinSymbolSpace:
    """Quotient of the induced module by the two norm relation families."""

    def __init__(self, module):
        self.module = module
        self.cosets = module.cosets
        self.weight = module.weight
        self.ring = module.ring
        relations = module.norm_matrix("s").stack(module.norm_matrix("t"))
        self.presentation = FPModule(self.ring, module.rank, relations)

    def rank(self):
        return self.presentation.rank()

    def dim(self):
        return self.presentation.dim()

    def torsion(self):
        return self.presentation.torsion()

    def __repr__(self):
        return "ManinSymbolSpace(rank=%d of %d, %s)" % (
            self.presentation.rank(),
            self.module.rank,
            self.ring.kind,
        )


class BoundarySpace:
    """Quotient of the induced module by the translation relations; classes
    are indexed by the cusps of the subgroup, each cut down by the twisted
    action of its width translation."""

    def __init__(self, module):
        self.module = module
        self.ring = module.ring
        relations = module.right_difference("T")
        self.presentation = FPModule(self.ring, module.rank, relations)

    def rank(self):
        return self.presentation.rank()

    def dim(self):
        return self.presentation.dim()

    def torsion(self):
        return self.presentation.torsion()

    def __repr__(self):
        return "BoundarySpace(rank=%d of %d, %s)" % (
            self.presentation.rank(),
            self.module.rank,
            self.ring.kind,
        )


def manin_space(cosets, weight):
    return ManinSymbolSpace(InducedModule(cosets, weight))


def boundary_space(source):
    """Boundary space attached to a ManinSymbolSpace or an InducedModule."""
    module = source.module if isinstance(source, ManinSymbolSpace) else source
    return BoundarySpace(module)


def boundary_map(space, boundary=None, check=False):
    """Difference-of-endpoints map from symbols to the boundary space.

    Well-definedness needs both norm relation families to land in the
    translation relations. That is automatic here: the generator order
    identities validated when the induced module was built give exactly
    N_sigma (1 - sigma) = 1 - sigma^2 = 0 and
    N_tau (1 - sigma) = N_tau (1 - tau sigma), whose rows are visibly
    combinations of the rows of 1 - T. Pass check=True to re-verify
    row by row anyway."""
    if boundary is None:
        boundary = boundary_space(space)
    module = space.module
    ambient = module.right_difference("s")
    return FPMap(space.presentation, boundary.presentation, ambient, check=check)


def cuspidal_subspace(space, bmap=None):
    """Kernel of the boundary map, with ambient generator rows."""
    if bmap is None:
        bmap = boundary_map(space)
    module, rows = bmap.kernel()
    return Subspace(module, rows)


def eisenstein_subspace(space, bmap=None):
    """Image of the boundary map, presented on the symbol generators."""
    if bmap is None:
        bmap = boundary_map(space)
    module, _ = bmap.image()
    return module


def convert_symbol(space, alpha, beta, coeffs=None):
    """Ambient coordinates of the path symbol {alpha, beta} (x) coeffs.

    Endpoints are Fractions (or ints) with None for the infinite cusp;
    coeffs is a coefficient list of length k - 1 over the weight ring and
    defaults to the first basis monomial. Requires a congruence coset table,
    since the path is cut into unimodular segments by continued fractions."""
    cosets = space.cosets
    if not isinstance(cosets, CongruenceCosets):
        raise UnsupportedRingError(
            "path conversion needs the cusp arithmetic of a congruence coset table"
        )
    module = space.module
    ring = space.ring
    blk = module.block
    if coeffs is None:
        v = [ring.one] + [ring.zero] * (blk - 1)
    else:
        v = list(coeffs)
        if len(v) != blk:
            raise ValueError("coefficient length must be the weight dimension")
    out = [ring.zero] * module.rank
    for seg, sign in continued_fraction_path(alpha, beta):
        j, gamma = cosets.symbol_cocycle(seg)
        acted = space.weight.action_matrix(gamma, cosets.n).transpose().act_on_row(v)
        base = j * blk
        if sign == 1:
            add = acted
        else:
            add = [ring.neg(x) for x in acted]
        out[base : base + blk] = [ring.add(a, b) for a, b in zip(out[base : base + blk], add)]
    return out
