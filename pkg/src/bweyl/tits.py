"""The extended Weyl group of type B with torus torsion, in normal form.

An element is a pair (t, w): a torsion torus element t (coordinate vector
over Z/2^k, default Z/4, in the coroot basis, recording exponents of a fixed
primitive fourth root of unity) times the canonical lift of the signed
permutation w.  The canonical lift of w is the product of the simple-root
lifts m_i along any reduced word of w; products are computed by left-folding
a reduced word of the left factor through the right factor with the rule

    m_i * (t, w) = (s_i.t + [length drops] * 2*alpha_i^vee, s_i w),

which encodes m_i^2 = "coroot of alpha_i evaluated at -1".  Well-definedness
over the choice of reduced word is exercised by the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from . import BudgetExceededError, VerificationError
from .roots import coroot, dot
from .sperm import SignedPermutation

__all__ = [
    "ExtendedWeylGroup",
    "GeneratedSubgroup",
    "MonomialElement",
    "TorusTorsionElement",
    "fixed_subgroup",
    "root_character_eval",
]

TorusTorsionElement = tuple  # coordinates over Z/2^k in the coroot basis


class MonomialElement(NamedTuple):
    torus: TorusTorsionElement
    weyl: SignedPermutation


class ExtendedWeylGroup:
    """Ambient context of rank n: caches reduced words and provides the
    group operations on normal-form pairs."""

    def __init__(self, n: int, k: int = 2, cocycle_rule: str = "descent"):
        if n < 2 or k < 2:
            raise ValueError("need rank >= 2 and torsion exponent k >= 2")
        if cocycle_rule not in ("descent", "ascent"):
            raise ValueError("cocycle_rule must be 'descent' or 'ascent'")
        self.n = n
        self.k = k
        self.modulus = 2**k
        # "ascent" deliberately corrupts the correction branch; it exists so
        # the verification suites can demonstrate they detect the corruption.
        self.cocycle_rule = cocycle_rule
        self._words: dict[tuple, tuple] = {}
        self._simples = [None] + [
            SignedPermutation.simple_reflection(n, i) for i in range(1, n + 1)
        ]
        # the fold result is affine in the right torus: caching the matrix
        # of each Weyl part and the cocycle of each Weyl pair makes repeated
        # products (closures, sweeps) cheap
        self._action_matrices: dict[tuple, np.ndarray] = {}
        self._cocycles: dict[tuple, tuple] = {}
        self.identity = MonomialElement(
            (0,) * n, SignedPermutation.identity(n)
        )

    # -- torus coordinate helpers -------------------------------------------

    def coroot_coords(self, evec: Iterable[int]) -> tuple:
        """Convert an e-basis cocharacter vector (even coordinate sum) into
        coroot-basis coordinates: c_1 = (sum v_j)/2, c_i = suffix sums."""
        v = list(evec)
        total = sum(v)
        if total % 2:
            raise ValueError(f"{v} is not in the coroot lattice")
        coords = [0] * self.n
        coords[0] = total // 2
        for i in range(1, self.n):
            coords[i] = sum(v[i:])
        return tuple(c % self.modulus for c in coords)

    def evec_from_coords(self, coords: Iterable[int]) -> tuple:
        """Inverse of coroot_coords, with values mod the torsion modulus."""
        c = list(coords)
        v = [0] * self.n
        v[0] = 2 * c[0] - (c[1] if self.n > 1 else 0)
        for i in range(1, self.n - 1):
            v[i] = c[i] - c[i + 1]
        if self.n > 1:
            v[self.n - 1] = c[self.n - 1]
        return tuple(x % self.modulus for x in v)

    def h_short(self, i: int, exponent: int = 1) -> MonomialElement:
        """The image of the coroot of e_i at the fourth root of unity raised
        to `exponent`: coordinates exponent * (1, 2, ..., 2, 0, ..., 0)."""
        coords = [0] * self.n
        coords[0] = exponent % self.modulus
        for j in range(1, i):
            coords[j] = (2 * exponent) % self.modulus
        return MonomialElement(tuple(coords), SignedPermutation.identity(self.n))

    def h_simple(self, i: int) -> MonomialElement:
        """The lift relation value m_i^2: coordinates 2 * unit_i."""
        coords = [0] * self.n
        coords[i - 1] = 2
        return MonomialElement(tuple(coords), SignedPermutation.identity(self.n))

    def torus(self, coords: Iterable[int]) -> MonomialElement:
        return MonomialElement(
            tuple(c % self.modulus for c in coords),
            SignedPermutation.identity(self.n),
        )

    def in_torsion_two(self, x: MonomialElement) -> bool:
        """Membership in H = (torsion torus) cap (extended Weyl group):
        trivial Weyl part and all coordinates even."""
        return x.weyl.is_identity() and all(c % 2 == 0 for c in x.torus)

    # -- reduced words -------------------------------------------------------

    def reduced_word(self, w: SignedPermutation) -> tuple:
        """Lexicographically least reduced word of w, cached."""
        key = w.images
        cached = self._words.get(key)
        if cached is not None:
            return cached
        word = []
        images = list(w.images)
        n = self.n
        # repeatedly strip the least left descent: w <- s_i w
        while True:
            inv = [0] * (n + 1)
            for pos, val in enumerate(images, start=1):
                if val > 0:
                    inv[val] = pos
                else:
                    inv[-val] = -pos
            i = _least_descent(inv, n)
            if i == 0:
                break
            word.append(i)
            _apply_simple_left(images, inv, i)
        self._words[key] = tuple(word)
        return tuple(word)

    def length(self, w: SignedPermutation) -> int:
        return len(self.reduced_word(w))

    # -- group operations ------------------------------------------------------

    def simple_lift(self, i: int) -> MonomialElement:
        if not 1 <= i <= self.n:
            raise ValueError(f"no simple lift with index {i}")
        return MonomialElement((0,) * self.n, self._simples[i])

    def lift(self, w: SignedPermutation) -> MonomialElement:
        """Canonical lift of w: torus part zero in normal form."""
        return MonomialElement((0,) * self.n, w)

    def mul(self, x: MonomialElement, y: MonomialElement) -> MonomialElement:
        """(t1, w1)(t2, w2) = (t1 + w1.t2 + cocycle(w1, w2), w1 w2)."""
        mod = self.modulus
        key = (x.weyl.images, y.weyl.images)
        hit = self._cocycles.get(key)
        if hit is None:
            hit = self._fold(x.weyl, y.weyl)
            self._cocycles[key] = hit
        cocycle, product = hit
        acted = self._action_matrix(x.weyl) @ np.array(y.torus, dtype=np.int64)
        torus = tuple(
            int(a + b + c) % mod for a, b, c in zip(x.torus, acted, cocycle)
        )
        return MonomialElement(torus, product)

    def _action_matrix(self, w: SignedPermutation) -> np.ndarray:
        m = self._action_matrices.get(w.images)
        if m is None:
            m = self.weyl_torus_matrix(w)
            self._action_matrices[w.images] = m
        return m

    def _fold(self, w1: SignedPermutation, w2: SignedPermutation):
        """Fold the reduced word of w1 through (0, w2): returns the cocycle
        torus correction and the product Weyl part."""
        n = self.n
        word = self.reduced_word(w1)
        t = [0] * n
        images = list(w2.images)
        inv = [0] * (n + 1)
        for pos, val in enumerate(images, start=1):
            if val > 0:
                inv[val] = pos
            else:
                inv[-val] = -pos
        flip = self.cocycle_rule == "ascent"
        for i in reversed(word):
            # descent test: w^{-1}(alpha_i) < 0
            if i == 1:
                descent = inv[1] < 0
            else:
                a, b = inv[i], inv[i - 1]
                descent = (a < 0) if abs(a) > abs(b) else (b > 0)
            _apply_simple_torus(t, i, n)
            if descent != flip:
                t[i - 1] += 2
            _apply_simple_left(images, inv, i)
        return tuple(c % self.modulus for c in t), SignedPermutation(tuple(images))

    def inv(self, x: MonomialElement) -> MonomialElement:
        winv = x.weyl.inverse()
        folded = self.mul(self.lift(winv), x)
        assert folded.weyl.is_identity()
        return MonomialElement(
            tuple(-c % self.modulus for c in folded.torus), winv
        )

    def power(self, x: MonomialElement, k: int) -> MonomialElement:
        if k < 0:
            return self.power(self.inv(x), -k)
        out = self.identity
        for _ in range(k):
            out = self.mul(out, x)
        return out

    def order(self, x: MonomialElement) -> int:
        k, acc = 1, x
        while acc != self.identity:
            acc = self.mul(acc, x)
            k += 1
            if k > 16 * self.modulus * 4**self.n:
                raise RuntimeError("runaway order computation")
        return k

    def conj_pow(self, x: MonomialElement, g: MonomialElement) -> MonomialElement:
        """x conjugated by g from the right: g^{-1} x g."""
        return self.mul(self.mul(self.inv(g), x), g)

    def conj(self, g: MonomialElement, x: MonomialElement) -> MonomialElement:
        """g x g^{-1}."""
        return self.mul(self.mul(g, x), self.inv(g))

    def commutator(self, x: MonomialElement, y: MonomialElement) -> MonomialElement:
        return self.mul(
            self.mul(self.inv(x), self.inv(y)), self.mul(x, y)
        )

    def prod(self, factors: Iterable[MonomialElement]) -> MonomialElement:
        out = self.identity
        for f in factors:
            out = self.mul(out, f)
        return out

    # -- Frobenius actions -----------------------------------------------------

    def frobenius_q(self, x: MonomialElement, q: int) -> MonomialElement:
        """The field power map: canonical lifts are fixed, torus coordinates
        multiply by q."""
        if q % 2 == 0:
            raise ValueError("q must be odd")
        return MonomialElement(
            tuple((q * c) % self.modulus for c in x.torus), x.weyl
        )

    def frobenius(
        self, x: MonomialElement, q: int, twist: MonomialElement
    ) -> MonomialElement:
        """Twisted Frobenius v * F_q(x) * v^{-1}."""
        return self.conj(twist, self.frobenius_q(x, q))

    def weyl_act_torus(self, w: SignedPermutation, coords: Iterable[int]) -> tuple:
        """Action of w on torus coordinates, via the reduced word."""
        t = list(coords)
        for i in reversed(self.reduced_word(w)):
            _apply_simple_torus(t, i, self.n)
        return tuple(c % self.modulus for c in t)

    def weyl_torus_matrix(self, w: SignedPermutation) -> np.ndarray:
        """Matrix of w on the coroot basis, reduced mod the torsion modulus."""
        cols = []
        for i in range(self.n):
            unit = [0] * self.n
            unit[i] = 1
            cols.append(self.weyl_act_torus(w, unit))
        return np.array(cols, dtype=np.int64).T % self.modulus

    # -- subsystem lifts --------------------------------------------------------

    def root_lift(self, a) -> MonomialElement:
        """A lift of the reflection in the positive root a that lies in the
        rank-one subgroup attached to a: the conjugate of a simple lift by a
        canonical lift moving the matching simple root onto a.

        The result is one of the two Chevalley generators over a; they differ
        by the order-2 torus element of a, which generation never sees.
        """
        nz = [(i + 1, v) for i, v in enumerate(a) if v]
        if dot(a, a) == 1:
            (j, s) = nz[0]
            if s < 0:
                raise ValueError("want a positive root")
            w = SignedPermutation.from_mapping(self.n, {1: j, j: 1} if j != 1 else {})
            base = 1
        elif dot(a, a) == 2:
            if len(nz) != 2:
                raise ValueError(f"{a} is not a root here")
            (i, si), (j, sj) = nz
            if sj < 0:
                raise ValueError("want a positive root")
            # map e_1 -> -si * e_i and e_2 -> e_j, so alpha_2 = e_2 - e_1 -> a
            w = _mapping_perm(self.n, -i * si, j)
            base = 2
        else:
            raise ValueError(f"{a} is not a root here")
        g = self.lift(w)
        return self.conj(g, self.simple_lift(base))

    def torus_of_root(self, a) -> MonomialElement:
        """The order-2 torus element attached to a root: its coroot at -1."""
        cr = coroot(a)
        return self.torus(self.coroot_coords(tuple(2 * x for x in cr)))


def _mapping_perm(n: int, target1: int, target2: int) -> SignedPermutation:
    """A signed permutation with 1 -> target1, 2 -> target2 (targets signed,
    distinct in absolute value), deterministic on the rest."""
    used = {abs(target1), abs(target2)}
    images = [0] * n
    images[0], images[1] = target1, target2
    spare = [v for v in range(1, n + 1) if v not in used]
    it = iter(spare)
    for pos in range(3, n + 1):
        images[pos - 1] = next(it)
    return SignedPermutation(tuple(images))


def _least_descent(inv: list, n: int) -> int:
    if inv[1] < 0:
        return 1
    for i in range(2, n + 1):
        a, b = inv[i], inv[i - 1]
        if (a < 0) if abs(a) > abs(b) else (b > 0):
            return i
    return 0


def _apply_simple_left(images: list, inv: list, i: int) -> None:
    """In place: w <- s_i w, maintaining the inverse table."""
    if i == 1:
        p = inv[1]
        images[abs(p) - 1] = -images[abs(p) - 1]
        inv[1] = -p
    else:
        p, r = inv[i - 1], inv[i]
        images[abs(p) - 1] = i if p > 0 else -i
        images[abs(r) - 1] = (i - 1) if r > 0 else -(i - 1)
        inv[i - 1], inv[i] = r, p


def _apply_simple_torus(t: list, i: int, n: int) -> None:
    """In place: t <- s_i . t on coroot coordinates."""
    if i == 1:
        t[0] = (t[1] if n > 1 else 0) - t[0]
    elif i == 2:
        t[1] = 2 * t[0] - t[1] + (t[2] if n > 2 else 0)
    else:
        t[i - 1] = t[i - 2] - t[i - 1] + (t[i] if i < n else 0)


# -- characters and fixed points ---------------------------------------------


def root_character_eval(a, x: MonomialElement | TorusTorsionElement) -> int:
    """The root a evaluated on a torsion torus element, as an exponent of the
    fixed fourth root of unity: sum_i c_i <a, coroot_i>, mod 4."""
    coords = x.torus if isinstance(x, MonomialElement) else x
    n = len(coords)
    total = 0
    for i, c in enumerate(coords, start=1):
        if c:
            if i == 1:
                cr = tuple(2 if j == 0 else 0 for j in range(n))
            else:
                cr = tuple(
                    1 if j == i - 1 else -1 if j == i - 2 else 0 for j in range(n)
                )
            total += c * dot(a, cr)
    return total % 4


@dataclass(frozen=True)
class GeneratedSubgroup:
    """A subgroup given by generators with its closure, deterministic order."""

    group: ExtendedWeylGroup
    generators: tuple
    elements: tuple

    @staticmethod
    def generate(
        group: ExtendedWeylGroup,
        generators: Iterable[MonomialElement],
        budget: int = 1_000_000,
    ) -> "GeneratedSubgroup":
        gens = list(generators)
        inv_gens = [group.inv(g) for g in gens]
        seen = {group.identity}
        order = [group.identity]
        frontier = [group.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens + inv_gens:
                    y = group.mul(x, g)
                    if y not in seen:
                        if len(seen) >= budget:
                            raise BudgetExceededError(
                                f"closure exceeded {budget} elements"
                            )
                        seen.add(y)
                        order.append(y)
                        nxt.append(y)
            frontier = nxt
        return GeneratedSubgroup(group, tuple(gens), tuple(order))

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x: MonomialElement) -> bool:
        return x in set(self.elements)


def fixed_subgroup(
    sub: GeneratedSubgroup, q: int, twist: MonomialElement, budget: int = 1_000_000
) -> GeneratedSubgroup:
    """Elements of a finite subgroup fixed by the twisted Frobenius."""
    g = sub.group
    if len(sub.elements) > budget:
        raise BudgetExceededError("subgroup too large for the fixed-point filter")
    fixed = [x for x in sub.elements if g.frobenius(x, q, twist) == x]
    return GeneratedSubgroup(g, tuple(fixed), tuple(fixed))


def torsion_two_subgroup_fixed_rank(
    group: ExtendedWeylGroup, l: int, q: int, twist: MonomialElement
) -> tuple[int, int]:
    """(rank, count) of the fixed points of the twisted Frobenius on the
    order-2 torus subgroup supported on the first l coroot coordinates.

    The twisted Frobenius is linear there, so the fixed subgroup is the
    kernel of (M - 1) mod 2 for M the Weyl action matrix; the element count
    is cross-checked by direct enumeration.
    """
    m = group.weyl_torus_matrix(twist.weyl)[:l, :l] % 2
    mm = (m - np.eye(l, dtype=np.int64)) % 2
    rank = _f2_rank(mm.copy())
    kernel_rank = l - rank
    # direct enumeration: all 2^l even vectors, vectorized
    bits = ((np.arange(2**l)[:, None] >> np.arange(l)[None, :]) & 1).astype(np.int64)
    fixed_mask = ((bits @ mm.T) % 2 == 0).all(axis=1)
    count = int(fixed_mask.sum())
    if count != 2**kernel_rank:
        raise VerificationError(
            "kernel rank disagrees with enumerated fixed-point count",
            {"l": l, "rank": kernel_rank, "count": count},
        )
    return kernel_rank, count


def _f2_rank(m: np.ndarray) -> int:
    rows, cols = m.shape
    rank = 0
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if m[r, c] % 2), None)
        if piv is None:
            continue
        m[[rank, piv]] = m[[piv, rank]]
        for r in range(rows):
            if r != rank and m[r, c] % 2:
                m[r] = (m[r] + m[rank]) % 2
        rank += 1
    return rank
