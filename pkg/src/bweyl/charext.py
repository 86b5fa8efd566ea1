"""Linear characters of the torus head H' and their extensions to inertia
subgroups of the supplement V' = C' x| P'.

Character values are exponents of a fixed primitive root of unity; the
modulus is the least common multiple of 4*d0 (for the cyclic part) and the
exponent of the relevant abelianization (for the symmetric part), so the
whole computation is exact integer arithmetic.

Also holds the wreath-product character-degree combinatorics used to
cross-check relative Weyl group structure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product as iproduct

from . import VerificationError
from .supplement import SupplementData
from .tits import MonomialElement

__all__ = [
    "ExtensionCharacter",
    "HPrimeCharacter",
    "check_multiplicative",
    "extend_character",
    "extension_report",
    "inertia_decomposition",
    "irr_of_hprime",
    "multipartitions",
    "verify_equivariance",
    "wreath_character_degrees",
]


# -- characters of H' ----------------------------------------------------------


@dataclass(frozen=True)
class HPrimeCharacter:
    """A sign character of the elementary abelian head, stored as a full
    value table (exponents mod 2: 0 for +1, 1 for -1)."""

    signs: tuple  # sign exponents on the basis (h_0, p_1'^2, ...)
    table: tuple  # ((element, exponent mod 2), ...) over all of H'

    def value(self, h: MonomialElement) -> int:
        return dict(self.table)[h]

    def __hash__(self):
        return hash(self.signs)


def _hprime_basis(data: SupplementData) -> list[MonomialElement]:
    g = data.ctx.group
    return [data.ctx.h0] + [g.mul(p, p) for p in data.p_primes]


def _hprime_coordinates(data: SupplementData) -> dict:
    """Coordinates of every H' element over the basis, certified by BFS."""
    cached = _scratch(data).get("hcoords")
    if cached is not None:
        return cached
    g = data.ctx.group
    basis = _hprime_basis(data)
    coords = {g.identity: (0,) * len(basis)}
    frontier = [g.identity]
    while frontier:
        nxt = []
        for x in frontier:
            cx = coords[x]
            for i, b in enumerate(basis):
                y = g.mul(x, b)
                cy = tuple((c + (1 if j == i else 0)) % 2 for j, c in enumerate(cx))
                if y in coords:
                    if coords[y] != cy:
                        raise VerificationError(
                            "head subgroup has hidden relations",
                            {"element": y},
                        )
                else:
                    coords[y] = cy
                    nxt.append(y)
        frontier = nxt
    if len(coords) != len(data.h_prime.elements):
        raise VerificationError("head coordinates missed elements", {})
    _scratch(data)["hcoords"] = coords
    return coords


def irr_of_hprime(data: SupplementData) -> list[HPrimeCharacter]:
    """All 2^rank sign characters, ordered by sign vector."""
    coords = _hprime_coordinates(data)
    rank = len(_hprime_basis(data))
    out = []
    for signs in iproduct((0, 1), repeat=rank):
        table = tuple(
            (elt, sum(s * c for s, c in zip(signs, cvec)) % 2)
            for elt, cvec in sorted(coords.items())
        )
        out.append(HPrimeCharacter(tuple(signs), table))
    return out


def _conj_action_on_characters(data: SupplementData, x: MonomialElement,
                               lam: HPrimeCharacter) -> HPrimeCharacter:
    """lam^x with (lam^x)(h) = lam(x h x^{-1})."""
    g = data.ctx.group
    coords = _hprime_coordinates(data)
    basis = _hprime_basis(data)
    new_signs = []
    for b in basis:
        hb = g.conj(x, b)
        if hb not in coords:
            raise VerificationError(
                "conjugation left the head subgroup", {"element": x}
            )
        new_signs.append(
            sum(s * c for s, c in zip(lam.signs, coords[hb])) % 2
        )
    table = tuple(
        (elt, sum(s * c for s, c in zip(new_signs, cvec)) % 2)
        for elt, cvec in sorted(coords.items())
    )
    return HPrimeCharacter(tuple(new_signs), table)


# -- inertia -------------------------------------------------------------------


def inertia_decomposition(data: SupplementData, lam: HPrimeCharacter,
                          brute_cap: int = 3000):
    """(C', P'_lam).  The brute-force stabilizer over all of V' cross-checks
    the semidirect shape whenever |V'| is within the cap; above it the
    cyclic part's triviality on characters (a generator check, which the
    conjugation action being a homomorphism extends to the closure) plus the
    symmetric-part filter give the same set."""
    key = ("inertia", lam.signs)
    cached = _scratch(data).get(key)
    if cached is not None:
        return cached
    g = data.ctx.group
    p_stab = [
        p for p in data.p_closure.elements
        if _conj_action_on_characters(data, p, lam) == lam
    ]
    for c in data.c_primes:
        if _conj_action_on_characters(data, c, lam) != lam:
            raise VerificationError(
                "the cyclic part does not fix a head character",
                {"signs": lam.signs},
            )
    if len(data.c_closure.elements) * len(data.p_closure.elements) <= brute_cap:
        stab_size = 0
        for c in data.c_closure.elements:
            for p in data.p_closure.elements:
                x = g.mul(c, p)
                if _conj_action_on_characters(data, x, lam) == lam:
                    stab_size += 1
        if stab_size != len(data.c_closure.elements) * len(p_stab):
            raise VerificationError(
                "inertia group is not the expected semidirect product",
                {"signs": lam.signs, "brute": stab_size,
                 "expected": len(data.c_closure.elements) * len(p_stab)},
            )
    result = (data.c_closure, p_stab)
    _scratch(data)[key] = result
    return result


_scratch_tables: dict = {}


def _scratch(data: SupplementData) -> dict:
    return _scratch_tables.setdefault(id(data), {})


# -- extensions ------------------------------------------------------------------


def _cyclic_sum_coordinates(data: SupplementData) -> dict:
    """For every element of C', the sum of its exponents over the c_i',
    modulo 4*d0 (well defined by the central product structure)."""
    cached = _scratch(data).get("csum")
    if cached is not None:
        return cached
    g = data.ctx.group
    mod = 4 * data.ctx.d0
    coords = {g.identity: 0}
    frontier = [g.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for c in data.c_primes:
                y = g.mul(x, c)
                cy = (coords[x] + 1) % mod
                if y in coords:
                    if coords[y] != cy:
                        raise VerificationError(
                            "cyclic part has hidden relations", {}
                        )
                else:
                    coords[y] = cy
                    nxt.append(y)
        frontier = nxt
    _scratch(data)["csum"] = coords
    return coords


def _subgroup_elements(mul, identity, gens):
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            for h in gens:
                y = mul(x, h)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def _linear_characters(elements, mul, identity, inverse, modulus):
    """All linear characters of a small group, as exponent dictionaries
    modulo `modulus` (which the abelianization exponent must divide)."""
    elems = sorted(elements)
    # derived subgroup
    comms = {
        mul(mul(inverse(x), inverse(y)), mul(x, y)) for x in elems for y in elems
    }
    derived = _subgroup_elements(mul, identity, comms)
    # coset representatives of the abelianization
    rep_of = {}
    reps = []
    for x in elems:
        if x in rep_of:
            continue
        coset = sorted(mul(x, d) for d in derived)
        for y in coset:
            rep_of[y] = coset[0]
        reps.append(coset[0])
    # greedy generating sequence of the abelianization
    gens = []
    span = {rep_of[identity]}
    for r in sorted(reps):
        if r in span:
            continue
        gens.append(r)
        span = {rep_of[x] for x in _subgroup_elements(
            mul, identity, [g for g in gens])}
        span |= {rep_of[mul(s, d)] for s in list(span) for d in derived}
    orders = []
    for r in gens:
        k, acc = 1, r
        while rep_of[acc] != rep_of[identity]:
            acc = mul(acc, r)
            k += 1
        orders.append(k)
    chars = []
    for exps in iproduct(*[range(o) for o in orders]):
        # propagate values by BFS over generator multiplication
        values = {rep_of[identity]: 0}
        frontier = [rep_of[identity]]
        ok = True
        while frontier and ok:
            nxt = []
            for x in frontier:
                for gen, e, o in zip(gens, exps, orders):
                    if modulus % o:
                        ok = False
                        break
                    y = rep_of[mul(x, gen)]
                    val = (values[x] + e * (modulus // o)) % modulus
                    if y in values:
                        if values[y] != val:
                            ok = False
                            break
                    else:
                        values[y] = val
                        nxt.append(y)
                if not ok:
                    break
            frontier = nxt
        if ok and len(values) == len(reps):
            chars.append({x: values[rep_of[x]] for x in elems})
    expected = len(reps)
    if len(chars) != expected:
        raise VerificationError(
            "linear character count disagrees with the abelianization",
            {"found": len(chars), "expected": expected},
        )
    return chars


@dataclass
class ExtensionCharacter:
    """A linear character of V'_lam = C' x| P'_lam, evaluated through the
    unique decomposition x = c * p."""

    data: SupplementData
    lam: HPrimeCharacter
    modulus: int
    theta_exp: int  # exponent on each c_i' (times modulus / (4 d0))
    mu: dict  # P'_lam element -> exponent
    csum: dict
    p_stab: list

    def value(self, x: MonomialElement) -> int:
        g = self.data.ctx.group
        if not hasattr(self, "_p_by_weyl"):
            # the symmetric factor of x = c * p is pinned by the Weyl image
            # of x modulo the Weyl image of C', so bucket the candidates
            rho_c = {c.weyl for c in self.data.c_closure.elements}
            buckets: dict = {}
            for p in self.p_stab:
                for w in rho_c:
                    buckets.setdefault(w * p.weyl, []).append((p, g.inv(p)))
            self._p_by_weyl = buckets
        for p, p_inv in self._p_by_weyl.get(x.weyl, ()):
            c = g.mul(x, p_inv)
            if c in self.csum:
                scale = self.modulus // (4 * self.data.ctx.d0)
                return (self.theta_exp * self.csum[c] * scale + self.mu[p]) % self.modulus
        raise ValueError("element is not in the inertia subgroup")

    def conjugate(self, x: MonomialElement) -> "ExtensionCharacter":
        """The transported character g -> value(x g x^{-1})."""
        g = self.data.ctx.group
        return _TransportedCharacter(self, x)


class _TransportedCharacter:
    def __init__(self, base, x):
        self.base = base
        self.x = x
        self.modulus = base.modulus

    def value(self, y: MonomialElement) -> int:
        g = self.base.data.ctx.group
        return self.base.value(g.conj(self.x, y))


def extend_character(data: SupplementData, lam: HPrimeCharacter) -> ExtensionCharacter:
    """A linear extension of lam to its inertia subgroup: equal values on the
    c_i' pin the cyclic part, the symmetric part is the least solution of the
    restriction constraints among the linear characters of P'_lam."""
    g = data.ctx.group
    d0 = data.ctx.d0
    _, p_stab = inertia_decomposition(data, lam)
    csum = _cyclic_sum_coordinates(data)
    lam_values = dict(lam.table)
    # theta: value on every c_i' is a fixed root with square-chain matching
    # lam(h_0); h_0 sits at cyclic sum 2*d0
    theta_exp = 1 if lam_values[data.ctx.h0] else 0
    # modulus: enough room for the cyclic part and the symmetric part
    p_exponent = 1
    for p in p_stab:
        p_exponent = math.lcm(p_exponent, _element_order(g, p))
    modulus = math.lcm(4 * d0, p_exponent)

    def mul(a, b):
        return g.mul(a, b)

    chars = _linear_characters(
        p_stab, mul, g.identity, g.inv, modulus
    )
    # restriction constraints on the symmetric part: the head elements inside
    # P' must get their lam-values
    head_in_p = [h for h in data.h_prime.elements if h in set(p_stab)]
    valid = []
    for chi in chars:
        if all(
            chi[h] % modulus == (lam_values[h] * modulus // 2) % modulus
            for h in head_in_p
        ):
            valid.append(chi)
    if not valid:
        raise VerificationError(
            "no extension of the head character exists on the symmetric part",
            {"signs": lam.signs},
        )
    mu = min(valid, key=lambda chi: tuple(chi[x] for x in sorted(chi)))
    ext = ExtensionCharacter(data, lam, modulus, theta_exp, mu, csum, p_stab)
    _check_restriction(data, lam, ext)
    return ext


def _element_order(g, x) -> int:
    k, acc = 1, x
    while acc != g.identity:
        acc = g.mul(acc, x)
        k += 1
    return k


def _check_restriction(data: SupplementData, lam: HPrimeCharacter,
                       ext: ExtensionCharacter) -> None:
    lam_values = dict(lam.table)
    for h, sign in lam_values.items():
        got = ext.value(h)
        if got != (sign * ext.modulus // 2) % ext.modulus:
            raise VerificationError(
                "extension does not restrict to the head character",
                {"signs": lam.signs, "element": h, "got": got},
            )


def check_multiplicative(data: SupplementData, ext: ExtensionCharacter,
                         sample: int = 1000, seed: int = 7,
                         exhaustive_cap: int = 10_000) -> int:
    """Multiplicativity of the extension on pairs from the inertia subgroup:
    exhaustive when the subgroup is small, sampled otherwise.  Returns the
    number of checked pairs."""
    import random

    g = data.ctx.group
    rng = random.Random(seed)
    size = len(data.c_closure.elements) * len(ext.p_stab)
    if size**2 <= exhaustive_cap:
        elements = [
            g.mul(c, p)
            for c in data.c_closure.elements
            for p in ext.p_stab
        ]
        pairs = [(x, y) for x in elements for y in elements]
    elif size <= exhaustive_cap:
        # full closure against a generating set, plus random pairs
        elements = [
            g.mul(c, p)
            for c in data.c_closure.elements
            for p in ext.p_stab
        ]
        gens = list(data.c_primes) + list(data.p_primes)
        gens = [x for x in gens if x in set(elements)] or [g.identity]
        pairs = [(x, y) for x in elements for y in gens]
        pairs += [
            (rng.choice(elements), rng.choice(elements)) for _ in range(sample)
        ]
    else:
        # sample inertia elements as c * p products without materializing
        # the whole subgroup
        def draw():
            return g.mul(
                rng.choice(data.c_closure.elements), rng.choice(ext.p_stab)
            )

        pairs = [(draw(), draw()) for _ in range(sample)]
    for x, y in pairs:
        lhs = ext.value(g.mul(x, y))
        rhs = (ext.value(x) + ext.value(y)) % ext.modulus
        if lhs != rhs:
            raise VerificationError(
                "extension is not multiplicative",
                {"signs": ext.lam.signs, "x": x, "y": y},
            )
    return len(pairs)


# -- equivariant assembly --------------------------------------------------------


def verify_equivariance(data: SupplementData, e_action=None) -> dict:
    """Build the extension map on orbit representatives, transport along a
    fixed transversal, and check V'-equivariance on generators.  The
    `e_action` hook is for field automorphisms; they centralize the
    supplement here, so the default action is trivial and nontrivial hooks
    are reported as unexercised."""
    g = data.ctx.group
    if e_action is not None:
        raise NotImplementedError("nontrivial outer actions are not exercised")
    chars = irr_of_hprime(data)
    gens = [data.c_primes[0]] + list(data.p_primes)
    # orbits under the generated action, with transversal elements
    transversal: dict[tuple, tuple] = {}
    orbits = []
    for lam in sorted(chars, key=lambda c: c.signs):
        if lam.signs in transversal:
            continue
        orbit = {lam.signs: (lam, g.identity)}
        frontier = [lam]
        while frontier:
            nxt = []
            for mu in frontier:
                for x in gens:
                    nu = _conj_action_on_characters(data, x, mu)
                    if nu.signs not in orbit:
                        mover = g.mul(x, orbit[mu.signs][1])
                        orbit[nu.signs] = (nu, mover)
                        nxt.append(nu)
            frontier = nxt
        orbits.append(orbit)
        transversal.update(orbit)
    extension_of = {}
    for orbit in orbits:
        rep_signs = min(orbit)
        rep, _ = orbit[rep_signs]
        base_ext = extend_character(data, rep)
        for signs, (lam, mover) in orbit.items():
            extension_of[signs] = (
                base_ext if signs == rep_signs else base_ext.conjugate(g.inv(mover))
            )
    # equivariance on generators: Lambda(lam^x) == Lambda(lam)^x on the
    # inertia subgroup of lam^x
    checked = 0
    for lam in chars:
        for x in gens:
            nu = _conj_action_on_characters(data, x, lam)
            lhs = extension_of[nu.signs]
            rhs_base = extension_of[lam.signs]
            _, p_stab_nu = inertia_decomposition(data, nu)
            probes = list(data.c_primes) + list(p_stab_nu)
            for y in probes:
                want = rhs_base.value(g.conj(g.inv(x), y))
                if lhs.value(y) % lhs.modulus != want % lhs.modulus:
                    raise VerificationError(
                        "extension map is not equivariant",
                        {"lam": lam.signs, "x": x, "probe": y},
                    )
                checked += 1
    return {
        "orbits": [sorted(o) for o in orbits],
        "characters": len(chars),
        "equivariance_probes": checked,
        "outer_action": "trivial (nontrivial hooks not exercised)",
    }


def extension_report(data: SupplementData) -> dict:
    """Machine-readable summary per head character: sign vector, inertia
    order, extension value table on the supplement generators, and the
    equivariance verdict."""
    g = data.ctx.group
    per_character = []
    for lam in irr_of_hprime(data):
        ext = extend_character(data, lam)
        _, p_stab = inertia_decomposition(data, lam)
        gens = list(data.c_primes) + [p for p in data.p_primes if p in set(p_stab)]
        per_character.append({
            "signs": list(lam.signs),
            "inertia_order": len(data.c_closure.elements) * len(p_stab),
            "value_modulus": ext.modulus,
            "values_on_generators": [
                {"torus": list(x.torus), "weyl": list(x.weyl.images),
                 "exponent": ext.value(x)}
                for x in gens
            ],
        })
    equi = verify_equivariance(data)
    return {
        "d0": data.ctx.d0,
        "t_l": data.ctx.t_l,
        "m": data.ctx.m,
        "d": data.ctx.d,
        "characters": per_character,
        "orbits": equi["orbits"],
        "equivariant": True,
        "outer_action": equi["outer_action"],
    }


# -- wreath product degree combinatorics -------------------------------------------


def partitions(n: int):
    """All partitions of n, weakly decreasing tuples, lexicographic."""
    if n == 0:
        return [()]
    out = []

    def rec(remaining, maximum, prefix):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for part in range(min(remaining, maximum), 0, -1):
            rec(remaining - part, part, prefix + [part])

    rec(n, n, [])
    return out


def multipartitions(m: int, t: int):
    """All m-tuples of partitions with total size t."""
    if m == 1:
        return [(p,) for p in partitions(t)]
    out = []
    for first in range(t + 1):
        for p in partitions(first):
            for rest in multipartitions(m - 1, t - first):
                out.append((p,) + rest)
    return out


@lru_cache(maxsize=None)
def standard_tableaux_count(shape: tuple) -> int:
    """Hook length formula."""
    n = sum(shape)
    if n == 0:
        return 1
    hooks = 1
    for i, row in enumerate(shape):
        for j in range(row):
            arm = row - j - 1
            leg = sum(1 for r in shape[i + 1:] if r > j)
            hooks *= arm + leg + 1
    return math.factorial(n) // hooks


def wreath_character_degrees(m: int, t: int, budget: int = 10_000_000) -> list[int]:
    """Degrees of the irreducible characters of the wreath product of a
    cyclic group of order m by the symmetric group on t points, indexed by
    m-multipartitions of t."""
    if m < 1 or t < 1:
        raise ValueError("need m, t >= 1")
    if m**t * math.factorial(t) > budget:
        raise ValueError("group order exceeds the budget")
    degrees = []
    for mp in multipartitions(m, t):
        deg = math.factorial(t)
        for comp in mp:
            deg //= math.factorial(sum(comp))
        for comp in mp:
            deg *= standard_tableaux_count(comp)
        degrees.append(deg)
    order = m**t * math.factorial(t)
    if sum(d * d for d in degrees) != order:
        raise VerificationError(
            "degree squares do not sum to the group order",
            {"m": m, "t": t},
        )
    return sorted(degrees)
