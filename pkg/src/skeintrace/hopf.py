"""Finite-dimensional Hopf algebras by structure constants.

A ``HopfAlgebra`` stores multiplication, comultiplication, counit, unit and
antipode sparsely over an exact field, plus an optional R-matrix and ribbon
element.  Nothing is trusted: ``verify(H)`` re-derives every axiom, integrals
and cointegrals are computed as exact nullspaces (and their 1-dimensionality
checked), ribbon data is verified or derived by search, and the Drinfeld
double construction re-verifies everything it builds.

Conventions.  Sweedler sums are written in code comments as h1, h2 for
Delta(h) = sum h1 (x) h2.  The Drinfeld element is u = sum S(R2) R1, the
pivotal element g = u * nu^{-1} for a ribbon element nu, so S^2(x) = g x g^{-1}.
"""

from __future__ import annotations

from functools import cached_property

from .linalg import echelon, matvec, nullspace, rank, solve_exact
from .scalars import QQ
from .sparse import (
    dense_to_vec,
    vadd,
    vaxpy,
    vclean,
    veq,
    vec_to_dense,
    vscale,
    vsub,
    vtensor,
)


class HopfError(ValueError):
    """A structural hypothesis failed (bad axioms, missing data, ...)."""


# Tiers of twist data.  "ribbon" is the full package; "balanced" drops the
# two duality conditions (S(nu) = nu and nu^2 = u S(u)) and keeps exactly what
# twists, traces and pivotal structure consume: a central invertible nu with
# counit 1, Delta(nu) = (R21 R)^{-1} (nu (x) nu), and g = u nu^{-1} a grouplike
# implementing S^2.  Some unimodular doubles (e.g. of the 4-dim Taft algebra)
# carry a balanced twist but provably no ribbon element.
BALANCED_TWIST_CHECKS = (
    "ribbon_central",
    "ribbon_counit",
    "ribbon_comult",
    "ribbon_invertible",
    "pivotal_grouplike",
    "pivotal_implements_s2",
)
RIBBON_CHECKS = BALANCED_TWIST_CHECKS + ("ribbon_antipode_fixed", "ribbon_balancing")
TWIST_TIERS = {
    "ribbon": frozenset(RIBBON_CHECKS),
    "balanced": frozenset(BALANCED_TWIST_CHECKS),
}


class HopfAlgebra:
    """Structure constants: all tables sparse, indices 0-based.

    mult: dict (i,j) -> {k: c}        e_i e_j = sum c e_k
    comult: list, comult[i] = {(j,k): c}   Delta(e_i) = sum c e_j (x) e_k
    counit: list of scalars
    antipode: list, antipode[i] = {j: c}   S(e_i) = sum c e_j
    unit: {i: c}
    rmatrix: {(i,j): c} or None
    ribbon: {i: c} or None
    generators: basis indices generating H as an algebra (all, if unknown)
    characters: optional list of algebra maps H -> k as dense scalar lists
    twist_axioms: "ribbon" (default) or "balanced"; which tier the declared
        or derived twist element must satisfy (see TWIST_TIERS)
    """

    def __init__(
        self,
        name,
        field,
        basis,
        unit,
        counit,
        mult,
        comult,
        antipode,
        rmatrix=None,
        ribbon=None,
        generators=None,
        characters=None,
        twist_axioms="ribbon",
    ):
        self.name = name
        self.field = field
        self.basis = list(basis)
        self.dim = len(self.basis)
        self.unit = vclean(unit)
        self.counit = list(counit)
        self.mult = {k: vclean(v) for k, v in mult.items()}
        self.comult = [vclean(v) for v in comult]
        self.antipode = [vclean(v) for v in antipode]
        self.rmatrix = vclean(rmatrix) if rmatrix is not None else None
        self.ribbon = vclean(ribbon) if ribbon is not None else None
        self.generators = list(generators) if generators is not None else list(range(self.dim))
        self.characters = characters
        if twist_axioms not in TWIST_TIERS:
            raise HopfError(f"unknown twist tier {twist_axioms!r}")
        self.twist_axioms = twist_axioms
        assert len(self.counit) == self.dim
        assert len(self.comult) == self.dim
        assert len(self.antipode) == self.dim
        if characters:
            for chi in characters:
                assert self._is_character(chi), "declared character is not multiplicative"

    def __repr__(self):
        return f"HopfAlgebra({self.name}, dim={self.dim})"

    # -- elementary operations on sparse vectors ---------------------------

    def mul(self, v, w):
        out = {}
        for i, a in v.items():
            for j, b in w.items():
                t = self.mult.get((i, j))
                if t:
                    vaxpy(out, a * b, t)
        return out

    def mul_many(self, vecs):
        acc = self.unit
        for v in vecs:
            acc = self.mul(acc, v)
        return acc

    def apply_antipode(self, v):
        out = {}
        for i, a in v.items():
            vaxpy(out, a, self.antipode[i])
        return out

    @cached_property
    def _antipode_inv_cols(self):
        # columns of S^{-1}: solve S(x) = e_i for each i
        f = self.field
        smat = [
            [self.antipode[j].get(i, f.zero) for j in range(self.dim)]
            for i in range(self.dim)
        ]
        cols = []
        for i in range(self.dim):
            rhs = [f.one if k == i else f.zero for k in range(self.dim)]
            sol = solve_exact(f, smat, rhs)
            if sol is None:
                raise HopfError("antipode is not invertible")
            cols.append(dense_to_vec(sol))
        return cols

    def apply_antipode_inv(self, v):
        out = {}
        for i, a in v.items():
            vaxpy(out, a, self._antipode_inv_cols[i])
        return out

    def comult_vec(self, v):
        out = {}
        for i, a in v.items():
            vaxpy(out, a, self.comult[i])
        return out

    def counit_of(self, v):
        acc = self.field.zero
        for i, a in v.items():
            if self.counit[i]:
                acc = acc + a * self.counit[i]
        return acc

    def eq(self, v, w):
        return veq(v, w)

    def basis_vec(self, i):
        return {i: self.field.one}

    def dense(self, v):
        return vec_to_dense(v, self.dim, self.field.zero)

    # -- tensor-square arithmetic (elements of H (x) H, keys (i,j)) --------

    def mul2(self, a, b):
        """Product in H (x) H of sparse {(i,j): c} elements."""
        out = {}
        for (i1, j1), c1 in a.items():
            for (i2, j2), c2 in b.items():
                t1 = self.mult.get((i1, i2))
                if not t1:
                    continue
                t2 = self.mult.get((j1, j2))
                if not t2:
                    continue
                c = c1 * c2
                for k1, d1 in t1.items():
                    for k2, d2 in t2.items():
                        key = (k1, k2)
                        s = out.get(key, 0) + c * d1 * d2
                        if s:
                            out[key] = s
                        else:
                            out.pop(key, None)
        return out

    def unit2(self):
        return vtensor(self.unit, self.unit)

    def flip2(self, a):
        return {(j, i): c for (i, j), c in a.items()}

    def invert_element(self, v):
        """Two-sided inverse in H, or None."""
        f = self.field
        lm = self.left_mult_matrix(v)
        rhs = self.dense(self.unit)
        sol = solve_exact(f, lm, rhs)
        if sol is None:
            return None
        inv = dense_to_vec(sol)
        if not veq(self.mul(inv, v), self.unit):
            return None
        return inv

    def left_mult_matrix(self, v):
        f = self.field
        cols = [self.mul(v, self.basis_vec(j)) for j in range(self.dim)]
        return [[cols[j].get(i, f.zero) for j in range(self.dim)] for i in range(self.dim)]

    def right_mult_matrix(self, v):
        f = self.field
        cols = [self.mul(self.basis_vec(j), v) for j in range(self.dim)]
        return [[cols[j].get(i, f.zero) for j in range(self.dim)] for i in range(self.dim)]

    def is_central(self, v):
        return all(
            veq(self.mul(v, self.basis_vec(i)), self.mul(self.basis_vec(i), v))
            for i in range(self.dim)
        )

    def is_grouplike(self, v):
        return (
            self.field.eq(self.counit_of(v), self.field.one)
            and veq(self.comult_vec(v), vtensor(v, v))
        )

    def _is_character(self, chi):
        f = self.field
        ok = f.eq(
            sum_scalars(f, [chi[i] * c for i, c in self.unit.items()]), f.one
        )
        for i in range(self.dim):
            for j in range(self.dim):
                prod = self.mult.get((i, j), {})
                lhs = sum_scalars(f, [chi[k] * c for k, c in prod.items()])
                if not f.eq(lhs, chi[i] * chi[j]):
                    return False
        return ok

    # -- integrals ----------------------------------------------------------

    @cached_property
    def left_integral_space(self):
        """Basis of {L : h L = eps(h) L for all h}."""
        return self._integral_space(left=True)

    @cached_property
    def right_integral_space(self):
        return self._integral_space(left=False)

    def _integral_space(self, left):
        f = self.field
        rows = []
        for i in range(self.dim):
            m = (
                self.left_mult_matrix(self.basis_vec(i))
                if left
                else self.right_mult_matrix(self.basis_vec(i))
            )
            eps = self.counit[i]
            for r in range(self.dim):
                row = [
                    m[r][c] - (eps if r == c else f.zero) for c in range(self.dim)
                ]
                if any(row):
                    rows.append(row)
        return nullspace(f, rows, ncols=self.dim)

    @cached_property
    def left_integral(self):
        space = self.left_integral_space
        if len(space) != 1:
            raise HopfError(
                f"left integral space has dimension {len(space)}, expected 1"
            )
        return dense_to_vec(space[0])

    @cached_property
    def right_integral(self):
        space = self.right_integral_space
        if len(space) != 1:
            raise HopfError(
                f"right integral space has dimension {len(space)}, expected 1"
            )
        return dense_to_vec(space[0])

    @cached_property
    def is_unimodular(self):
        left = self.left_integral_space
        right = self.right_integral_space
        if len(left) != 1 or len(right) != 1:
            return False
        return rank(self.field, [left[0], right[0]]) == 1

    def _cointegral_space(self, right):
        """right=True: (lam (x) id) Delta(x) = lam(x) 1; else (id (x) lam)."""
        f = self.field
        one = self.dense(self.unit)
        rows = []
        for i in range(self.dim):
            # Delta(e_i) = sum c e_j (x) e_k; unknowns lam(e_0..e_{d-1})
            for out_coord in range(self.dim):
                row = [f.zero] * self.dim
                for (j, k), c in self.comult[i].items():
                    if right:
                        # lam(e_j) * coefficient of e_out in e_k
                        if k == out_coord:
                            row[j] = row[j] + c
                    else:
                        if j == out_coord:
                            row[k] = row[k] + c
                # minus lam(e_i) * (unit)_out
                if one[out_coord]:
                    row[i] = row[i] - one[out_coord]
                if any(row):
                    rows.append(row)
        return nullspace(f, rows, ncols=self.dim)

    @cached_property
    def right_cointegral_space(self):
        return self._cointegral_space(right=True)

    @cached_property
    def left_cointegral_space(self):
        return self._cointegral_space(right=False)

    def _normalized_cointegral(self, space):
        if len(space) != 1:
            raise HopfError(
                f"cointegral space has dimension {len(space)}, expected 1"
            )
        lam = space[0]
        f = self.field
        pairing = sum_scalars(f, [lam[i] * c for i, c in self.left_integral.items()])
        if not pairing:
            raise HopfError("cointegral vanishes on the left integral")
        inv = f.inv(pairing)
        return [x * inv for x in lam]

    @cached_property
    def right_cointegral(self):
        """Right cointegral, normalized so lam(left integral) = 1."""
        return self._normalized_cointegral(self.right_cointegral_space)

    @cached_property
    def left_cointegral(self):
        return self._normalized_cointegral(self.left_cointegral_space)

    # -- quasitriangular / ribbon data --------------------------------------

    @cached_property
    def rmatrix_inv(self):
        """(S (x) id) R, verified to invert R in H (x) H."""
        if self.rmatrix is None:
            raise HopfError("no R-matrix")
        cand = {}
        for (i, j), c in self.rmatrix.items():
            for k, d in self.antipode[i].items():
                key = (k, j)
                s = cand.get(key, 0) + c * d
                if s:
                    cand[key] = s
                else:
                    cand.pop(key, None)
        if not veq(self.mul2(cand, self.rmatrix), self.unit2()) or not veq(
            self.mul2(self.rmatrix, cand), self.unit2()
        ):
            raise HopfError("(S (x) id) R does not invert R")
        return cand

    @cached_property
    def drinfeld_u(self):
        """u = sum S(R2) R1."""
        if self.rmatrix is None:
            raise HopfError("no R-matrix")
        out = {}
        for (i, j), c in self.rmatrix.items():
            vaxpy(out, c, self.mul(self.antipode[j], self.basis_vec(i)))
        return out

    @cached_property
    def drinfeld_u_inv(self):
        inv = self.invert_element(self.drinfeld_u)
        if inv is None:
            raise HopfError("Drinfeld element is not invertible")
        return inv

    @cached_property
    def monodromy(self):
        """R21 R, the double braiding."""
        return self.mul2(self.flip2(self.rmatrix), self.rmatrix)

    @cached_property
    def monodromy_inv(self):
        """R^{-1} R21^{-1}, verified."""
        r21inv = self.flip2(self.rmatrix_inv)
        out = self.mul2(self.rmatrix_inv, r21inv)
        if not veq(self.mul2(out, self.monodromy), self.unit2()):
            raise HopfError("monodromy inverse check failed")
        return out

    def verify_ribbon_element(self, nu):
        """All ribbon conditions for nu; returns list of (name, ok)."""
        checks = []
        checks.append(("ribbon_central", self.is_central(nu)))
        checks.append(("ribbon_antipode_fixed", veq(self.apply_antipode(nu), nu)))
        checks.append(
            ("ribbon_counit", self.field.eq(self.counit_of(nu), self.field.one))
        )
        lhs = self.comult_vec(nu)
        rhs = self.mul2(self.monodromy_inv, vtensor(nu, nu))
        checks.append(("ribbon_comult", veq(lhs, rhs)))
        nu_inv = self.invert_element(nu)
        if nu_inv is None:
            checks.append(("ribbon_invertible", False))
            return checks
        checks.append(("ribbon_invertible", True))
        g = self.mul(self.drinfeld_u, nu_inv)
        checks.append(("pivotal_grouplike", self.is_grouplike(g)))
        ginv = self.invert_element(g)
        ok_s2 = ginv is not None and all(
            veq(
                self.apply_antipode(self.apply_antipode(self.basis_vec(i))),
                self.mul(self.mul(g, self.basis_vec(i)), ginv),
            )
            for i in range(self.dim)
        )
        checks.append(("pivotal_implements_s2", ok_s2))
        # balancing: nu^2 = u S(u)
        checks.append(
            (
                "ribbon_balancing",
                veq(
                    self.mul(nu, nu),
                    self.mul(self.drinfeld_u, self.apply_antipode(self.drinfeld_u)),
                ),
            )
        )
        return checks

    @cached_property
    def grouplikes(self):
        """Multiplicative closure of grouplike basis elements and declared
        characters' grouplikes (duals); deterministic order."""
        found = []

        def push(v):
            v = vclean(v)
            if all(not veq(v, w) for w in found):
                found.append(v)

        push(self.unit)
        for i in range(self.dim):
            v = self.basis_vec(i)
            if self.is_grouplike(v):
                push(v)
        # closure
        changed = True
        while changed:
            changed = False
            snapshot = list(found)
            for a in snapshot:
                for b in snapshot:
                    p = self.mul(a, b)
                    if all(not veq(p, w) for w in found):
                        assert self.is_grouplike(p)
                        found.append(p)
                        changed = True
            assert len(found) <= 4096, "grouplike closure did not stabilize"
        return found

    def derive_twist_elements(self, tier=None):
        """All nu = u l^{-1}, l grouplike, passing the tier's twist conditions.

        tier defaults to the algebra's declared twist_axioms.
        """
        if self.rmatrix is None:
            raise HopfError("no R-matrix")
        required = TWIST_TIERS[tier or self.twist_axioms]
        u = self.drinfeld_u
        out = []
        for ell in self.grouplikes:
            ell_inv = self.apply_antipode(ell)  # S(l) = l^{-1} for grouplike l
            nu = self.mul(u, ell_inv)
            checks = self.verify_ribbon_element(nu)
            if all(ok for name, ok in checks if name in required):
                out.append(nu)
        return out

    def derive_ribbon_elements(self):
        """All nu = u l^{-1}, l grouplike, passing every ribbon condition."""
        return self.derive_twist_elements(tier="ribbon")

    @cached_property
    def twist_element(self):
        """The declared or derived twist, verified at the declared tier.

        For tier "ribbon" this is a genuine ribbon element; for tier
        "balanced" the duality conditions S(nu) = nu and nu^2 = u S(u) are
        not required (and may fail).
        """
        required = TWIST_TIERS[self.twist_axioms]
        if self.ribbon is not None:
            bad = [
                name
                for name, ok in self.verify_ribbon_element(self.ribbon)
                if not ok and name in required
            ]
            if bad:
                raise HopfError(
                    f"declared twist element fails: {', '.join(bad)}"
                )
            return self.ribbon
        cands = self.derive_twist_elements()
        if not cands:
            raise HopfError(f"no {self.twist_axioms} twist element found")
        # canonical pick: the identity if valid, else first in derivation order
        for nu in cands:
            if veq(nu, self.unit):
                return nu
        return cands[0]

    @cached_property
    def twist_inv(self):
        inv = self.invert_element(self.twist_element)
        assert inv is not None
        return inv

    @cached_property
    def pivotal(self):
        """g = u nu^{-1}, grouplike, S^2 = g (.) g^{-1}."""
        return self.mul(self.drinfeld_u, self.twist_inv)

    @cached_property
    def pivotal_inv(self):
        inv = self.invert_element(self.pivotal)
        assert inv is not None
        return inv


def sum_scalars(field, xs):
    acc = field.zero
    for x in xs:
        if x:
            acc = acc + x
    return acc


# -- axiom verification ------------------------------------------------------


def _check(name, ok, detail="", required=True):
    return {"check": name, "ok": bool(ok), "detail": detail, "required": required}


def verify_hopf_axioms(H: HopfAlgebra):
    """Exhaustive exact verification; returns a list of check dicts."""
    f = H.field
    out = []
    d = H.dim

    ok = all(
        veq(H.mul(H.unit, H.basis_vec(i)), H.basis_vec(i))
        and veq(H.mul(H.basis_vec(i), H.unit), H.basis_vec(i))
        for i in range(d)
    )
    out.append(_check("unit", ok))

    bad = None
    for i in range(d):
        for j in range(d):
            vij = H.mult.get((i, j), {})
            for k in range(d):
                lhs = H.mul(vij, H.basis_vec(k))
                rhs = H.mul(H.basis_vec(i), H.mult.get((j, k), {}))
                if not veq(lhs, rhs):
                    bad = (i, j, k)
                    break
            if bad:
                break
        if bad:
            break
    out.append(_check("associativity", bad is None, f"fails at {bad}" if bad else ""))

    ok = True
    for i in range(d):
        left = {}
        right = {}
        for (j, k), c in H.comult[i].items():
            if H.counit[j]:
                vaxpy(left, c * H.counit[j], H.basis_vec(k))
            if H.counit[k]:
                vaxpy(right, c * H.counit[k], H.basis_vec(j))
        if not veq(left, H.basis_vec(i)) or not veq(right, H.basis_vec(i)):
            ok = False
            break
    out.append(_check("counit", ok))

    ok = True
    for i in range(d):
        lhs = {}
        rhs = {}
        for (j, k), c in H.comult[i].items():
            for (a, b), c2 in H.comult[j].items():
                key = (a, b, k)
                s = lhs.get(key, 0) + c * c2
                if s:
                    lhs[key] = s
                else:
                    lhs.pop(key, None)
            for (a, b), c2 in H.comult[k].items():
                key = (j, a, b)
                s = rhs.get(key, 0) + c * c2
                if s:
                    rhs[key] = s
                else:
                    rhs.pop(key, None)
        if vclean(lhs) != vclean(rhs):
            ok = False
            break
    out.append(_check("coassociativity", ok))

    ok = f.eq(H.counit_of(H.unit), f.one) and all(
        f.eq(
            H.counit_of(H.mult.get((i, j), {})),
            H.counit[i] * H.counit[j],
        )
        for i in range(d)
        for j in range(d)
    )
    out.append(_check("counit_multiplicative", ok))

    ok = veq(H.comult_vec(H.unit), H.unit2())
    if ok:
        for i in range(d):
            di = H.comult[i]
            for j in range(d):
                lhs = H.comult_vec(H.mult.get((i, j), {}))
                rhs = H.mul2(di, H.comult[j])
                if not veq(lhs, rhs):
                    ok = False
                    break
            if not ok:
                break
    out.append(_check("comult_multiplicative", ok))

    ok = True
    for i in range(d):
        acc_l = {}
        acc_r = {}
        for (j, k), c in H.comult[i].items():
            vaxpy(acc_l, c, H.mul(H.antipode[j], H.basis_vec(k)))
            vaxpy(acc_r, c, H.mul(H.basis_vec(j), H.antipode[k]))
        target = vscale(H.counit[i], H.unit)
        if not veq(acc_l, target) or not veq(acc_r, target):
            ok = False
            break
    out.append(_check("antipode", ok))

    try:
        li = H.left_integral_space
        ri = H.right_integral_space
        out.append(_check("integral_left_1dim", len(li) == 1, f"dim={len(li)}"))
        out.append(_check("integral_right_1dim", len(ri) == 1, f"dim={len(ri)}"))
        out.append(
            _check(
                "unimodular",
                H.is_unimodular,
                "left and right integrals agree"
                if H.is_unimodular
                else "left and right integrals differ",
            )
        )
        lc = H.left_cointegral_space
        rc = H.right_cointegral_space
        out.append(_check("cointegral_left_1dim", len(lc) == 1, f"dim={len(lc)}"))
        out.append(_check("cointegral_right_1dim", len(rc) == 1, f"dim={len(rc)}"))
        if len(li) == 1 and len(rc) == 1:
            lam = rc[0]
            pairing = sum_scalars(f, [lam[i] * c for i, c in H.left_integral.items()])
            out.append(
                _check("cointegral_integral_pairing", bool(pairing), "lam(Lambda) != 0")
            )
    except HopfError as exc:
        out.append(_check("integrals", False, str(exc)))

    if H.rmatrix is not None:
        out.extend(verify_quasitriangular(H))
    return out


def verify_quasitriangular(H: HopfAlgebra):
    """R-matrix axioms: invertibility, intertwining, both hexagons."""
    out = []
    try:
        H.rmatrix_inv
        out.append(_check("r_invertible", True))
    except HopfError as exc:
        out.append(_check("r_invertible", False, str(exc)))
        return out

    ok = True
    for i in H.generators:
        delta = H.comult[i]
        delta_op = H.flip2(delta)
        if not veq(H.mul2(delta_op, H.rmatrix), H.mul2(H.rmatrix, delta)):
            ok = False
            break
    out.append(_check("r_intertwines", ok))

    # (Delta (x) id) R = R13 R23 ; (id (x) Delta) R = R13 R12, in H^(x)3
    def mul3(a, b):
        res = {}
        for ka, ca in a.items():
            for kb, cb in b.items():
                t0 = H.mult.get((ka[0], kb[0]))
                if not t0:
                    continue
                t1 = H.mult.get((ka[1], kb[1]))
                if not t1:
                    continue
                t2 = H.mult.get((ka[2], kb[2]))
                if not t2:
                    continue
                c = ca * cb
                for x0, d0 in t0.items():
                    for x1, d1 in t1.items():
                        cd = c * d0 * d1
                        for x2, d2 in t2.items():
                            key = (x0, x1, x2)
                            s = res.get(key, 0) + cd * d2
                            if s:
                                res[key] = s
                            else:
                                res.pop(key, None)
        return res

    one = next(iter(H.unit)) if len(H.unit) == 1 else None

    def embed(r, legs):
        res = {}
        for (i, j), c in r.items():
            for u, cu in H.unit.items():
                key = [u, u, u]
                key[legs[0]] = i
                key[legs[1]] = j
                kk = tuple(key)
                s = res.get(kk, 0) + (c * cu if len(H.unit) > 1 or one is None else c)
                if s:
                    res[kk] = s
                else:
                    res.pop(kk, None)
        return res

    lhs1 = {}
    for (i, j), c in H.rmatrix.items():
        for (a, b), c2 in H.comult[i].items():
            key = (a, b, j)
            s = lhs1.get(key, 0) + c * c2
            if s:
                lhs1[key] = s
            else:
                lhs1.pop(key, None)
    rhs1 = mul3(embed(H.rmatrix, (0, 2)), embed(H.rmatrix, (1, 2)))
    out.append(_check("r_hexagon_1", vclean(lhs1) == vclean(rhs1)))

    lhs2 = {}
    for (i, j), c in H.rmatrix.items():
        for (a, b), c2 in H.comult[j].items():
            key = (i, a, b)
            s = lhs2.get(key, 0) + c * c2
            if s:
                lhs2[key] = s
            else:
                lhs2.pop(key, None)
    rhs2 = mul3(embed(H.rmatrix, (0, 2)), embed(H.rmatrix, (0, 1)))
    out.append(_check("r_hexagon_2", vclean(lhs2) == vclean(rhs2)))

    try:
        u = H.drinfeld_u
        uinv = H.drinfeld_u_inv
        ok = all(
            veq(
                H.apply_antipode(H.apply_antipode(H.basis_vec(i))),
                H.mul(H.mul(u, H.basis_vec(i)), uinv),
            )
            for i in range(H.dim)
        )
        out.append(_check("drinfeld_u_implements_s2", ok))
    except HopfError as exc:
        out.append(_check("drinfeld_u_implements_s2", False, str(exc)))
    return out


def verify_twist(H: HopfAlgebra):
    """Twist checks at the algebra's declared tier.

    All ribbon conditions are computed and reported; those outside the
    declared tier carry required=False (informational — e.g. a balanced
    twist on an algebra with no ribbon element fails S(nu) = nu, and that
    failure is shown but does not count against the algebra).
    """
    required = TWIST_TIERS[H.twist_axioms]
    try:
        nu = H.twist_element
    except HopfError as exc:
        return [_check("ribbon_exists", False, str(exc))]
    out = [_check("ribbon_exists", True, f"tier={H.twist_axioms}")]
    for name, ok in H.verify_ribbon_element(nu):
        out.append(_check(name, ok, required=name in required))
    return out


def verify(H: HopfAlgebra, need_twist=True):
    """Full verification suite; twist checks only if an R-matrix is present."""
    out = verify_hopf_axioms(H)
    if H.rmatrix is not None and need_twist:
        out.extend(verify_twist(H))
    return out


# -- builtins ----------------------------------------------------------------


def _perm_compose(p, q):
    """(p after q) as one-line tuples: (p∘q)(i) = p(q(i))."""
    return tuple(p[q[i]] for i in range(len(p)))


def group_algebra(name, elements, compose, inverse, characters=None):
    """k[G] over Q with the trivial R-matrix."""
    d = len(elements)
    index = {g: i for i, g in enumerate(elements)}
    mult = {}
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            mult[(i, j)] = {index[compose(a, b)]: 1}
    comult = [{(i, i): 1} for i in range(d)]
    counit = [1] * d
    antipode = [{index[inverse(g)]: 1} for g in elements]
    e = index[elements[0]]
    assert all(compose(elements[e], g) == g for g in elements), "first element must be the identity"
    return HopfAlgebra(
        name,
        QQ,
        [str(g) for g in elements],
        unit={e: 1},
        counit=counit,
        mult=mult,
        comult=comult,
        antipode=antipode,
        rmatrix={(e, e): 1},
        ribbon={e: 1},
        characters=characters,
    )


def group_z2():
    els = [(0, 1), (1, 0)]
    chars = [[1, 1], [1, -1]]
    return group_algebra(
        "group_z2",
        els,
        _perm_compose,
        lambda g: g,
        characters=chars,
    )


def group_s3():
    els = sorted({p for p in _all_perms(3)})
    sign = {p: _perm_sign(p) for p in els}
    chars = [[1] * 6, [sign[p] for p in els]]
    return group_algebra(
        "group_s3",
        els,
        _perm_compose,
        _perm_inverse,
        characters=chars,
    )


def _all_perms(n):
    from itertools import permutations

    return [tuple(p) for p in permutations(range(n))]


def _perm_inverse(p):
    inv = [0] * len(p)
    for i, v in enumerate(p):
        inv[v] = i
    return tuple(inv)


def _perm_sign(p):
    sign = 1
    n = len(p)
    for i in range(n):
        for j in range(i + 1, n):
            if p[i] > p[j]:
                sign = -sign
    return sign


def sweedler():
    """Taft's 4-dimensional algebra: g^2 = 1, x^2 = 0, xg = -gx."""
    # basis 1, g, x, gx
    ONE, G, X, GX = range(4)
    mult = {
        (ONE, ONE): {ONE: 1}, (ONE, G): {G: 1}, (ONE, X): {X: 1}, (ONE, GX): {GX: 1},
        (G, ONE): {G: 1}, (G, G): {ONE: 1}, (G, X): {GX: 1}, (G, GX): {X: 1},
        (X, ONE): {X: 1}, (X, G): {GX: -1}, (X, X): {}, (X, GX): {},
        (GX, ONE): {GX: 1}, (GX, G): {X: -1}, (GX, X): {}, (GX, GX): {},
    }
    comult = [
        {(ONE, ONE): 1},
        {(G, G): 1},
        {(X, ONE): 1, (G, X): 1},
        {(GX, G): 1, (ONE, GX): 1},
    ]
    counit = [1, 1, 0, 0]
    antipode = [{ONE: 1}, {G: 1}, {GX: -1}, {X: 1}]
    chars = [[1, 1, 0, 0], [1, -1, 0, 0]]
    return HopfAlgebra(
        "sweedler",
        QQ,
        ["1", "g", "x", "gx"],
        unit={ONE: 1},
        counit=counit,
        mult=mult,
        comult=comult,
        antipode=antipode,
        generators=[G, X],
        characters=chars,
    )


def drinfeld_double(H: HopfAlgebra, name=None):
    """D(H) on H* (x) H: (f (x) h)(f' (x) h') = f (h1 -> f' <- S^-1 h3) (x) h2 h'.

    Index (i, j) -> i*d + j encodes e_i* (x) e_j.  The dual-side product is
    convolution (f f'')(x) = f(x1) f''(x2); the dual-side comultiplication is
    reversed (the "cop" twist), Delta_D(f (x) h) = (f2 (x) h1) (x) (f1 (x) h2).
    """
    f = H.field
    d = H.dim
    dd = d * d

    def idx(i, j):
        return i * d + j

    # convolution on H*: (e_a* e_b*)(e_x) = sum over Delta(e_x) of c [j=a][k=b]
    conv = {}
    for x in range(d):
        for (j, k), c in H.comult[x].items():
            key = (j, k)
            dst = conv.setdefault(key, {})
            s = dst.get(x, 0) + c
            if s:
                dst[x] = s
            else:
                dst.pop(x, None)

    # H* comultiplication: Delta(e_t*) = sum_{(p,q): e_p e_q has e_t} c e_p* (x) e_q*
    dual_comult = [dict() for _ in range(d)]
    for (p, q), prod in H.mult.items():
        for t, c in prod.items():
            dst = dual_comult[t]
            s = dst.get((p, q), 0) + c
            if s:
                dst[(p, q)] = s
            else:
                dst.pop((p, q), None)

    # iterated Delta components h1 (x) h2 (x) h3 of each basis element
    delta3 = []
    for i in range(d):
        acc = {}
        for (a, b), c in H.comult[i].items():
            for (a1, a2), c2 in H.comult[a].items():
                key = (a1, a2, b)
                s = acc.get(key, 0) + c * c2
                if s:
                    acc[key] = s
                else:
                    acc.pop(key, None)
        delta3.append(acc)

    eps_star = {}  # the functional eps as element of H*: eps = sum eps(e_i) e_i*
    for i in range(d):
        if H.counit[i]:
            eps_star[i] = H.counit[i]

    mult = {}
    for fi in range(d):
        for hi in range(d):
            for fj in range(d):
                for hj in range(d):
                    acc = {}
                    # sum over Delta^2(e_hi) = h1 (x) h2 (x) h3
                    for (h1, h2, h3), c in delta3[hi].items():
                        # shifted functional: x -> e_fj*(S^-1(e_h3) x e_h1)
                        sh3 = H._antipode_inv_cols[h3]
                        # shifted(e_x) = sum_{s,t} sh3[s] e_fj*(e_s e_x e_h1)
                        shifted = {}
                        for s, cs in sh3.items():
                            for x in range(d):
                                t1 = H.mult.get((s, x))
                                if not t1:
                                    continue
                                acc2 = f.zero
                                for m1, cm in t1.items():
                                    t2 = H.mult.get((m1, h1))
                                    if t2 and fj in t2:
                                        acc2 = acc2 + cm * t2[fj]
                                if acc2:
                                    sv = shifted.get(x, 0) + cs * acc2
                                    if sv:
                                        shifted[x] = sv
                                    else:
                                        shifted.pop(x, None)
                        if not shifted:
                            continue
                        # convolution e_fi* * shifted, as functional on H
                        # shifted = sum shifted[x] e_x*
                        for x, cx in shifted.items():
                            t = conv.get((fi, x))
                            if not t:
                                continue
                            # resulting functional coordinate e_t*
                            hh = H.mult.get((h2, hj))
                            if not hh:
                                continue
                            for tt, ct in t.items():
                                for hk, chk in hh.items():
                                    key = idx(tt, hk)
                                    s = acc.get(key, 0) + c * cx * ct * chk
                                    if s:
                                        acc[key] = s
                                    else:
                                        acc.pop(key, None)
                    mult[(idx(fi, hi), idx(fj, hj))] = acc

    comult = []
    for fi in range(d):
        for hi in range(d):
            acc = {}
            for (p, q), c in dual_comult[fi].items():
                for (a, b), c2 in H.comult[hi].items():
                    # cop on the dual side: (f2 (x) h1) (x) (f1 (x) h2)
                    key = (idx(q, a), idx(p, b))
                    s = acc.get(key, 0) + c * c2
                    if s:
                        acc[key] = s
                    else:
                        acc.pop(key, None)
            comult.append(acc)

    counit = []
    for fi in range(d):
        for hi in range(d):
            # f(1) eps(h)
            val = f.zero
            for ui, cu in H.unit.items():
                if ui == fi:
                    val = val + cu
            counit.append(val * H.counit[hi])

    unit = {}
    for i, c in eps_star.items():
        for ui, cu in H.unit.items():
            unit[idx(i, ui)] = c * cu

    basis = [
        f"{H.basis[i]}* (x) {H.basis[j]}" for i in range(d) for j in range(d)
    ]

    D = HopfAlgebra(
        name or f"double_{H.name}",
        f,
        basis,
        unit=unit,
        counit=counit,
        mult=mult,
        comult=comult,
        antipode=[{} for _ in range(dd)],  # placeholder, filled below
        generators=None,
        characters=None,
    )

    # antipode via S_D(f (x) h) = (eps (x) S(h)) . (f o S^-1 (x) 1), computed
    # with the verified multiplication above
    antipode = []
    for fi in range(d):
        # f o S^-1 as functional: (e_fi* o S^-1)(e_x) = S^-1(e_x)[fi]
        fS = {}
        for x in range(d):
            c = H._antipode_inv_cols[x].get(fi)
            if c:
                fS[x] = c
        for hi in range(d):
            left = {}
            for sh, c in H.antipode[hi].items():
                for ei, ce in eps_star.items():
                    left[idx(ei, sh)] = left.get(idx(ei, sh), 0) + c * ce
            right = {}
            for x, c in fS.items():
                for ui, cu in H.unit.items():
                    right[idx(x, ui)] = right.get(idx(x, ui), 0) + c * cu
            antipode.append(D.mul(vclean(left), vclean(right)))
    D.antipode = [vclean(v) for v in antipode]
    if "_antipode_inv_cols" in D.__dict__:
        del D.__dict__["_antipode_inv_cols"]

    # R = sum_i (eps (x) e_i) (x) (e_i* (x) 1)
    rmatrix = {}
    for i in range(d):
        for ei, ce in eps_star.items():
            for ui, cu in H.unit.items():
                key = (idx(ei, i), idx(i, ui))
                rmatrix[key] = rmatrix.get(key, 0) + ce * cu
    D.rmatrix = vclean(rmatrix)

    # generators: (eps (x) e_j) and (e_i* (x) 1)
    gens = []
    if len(eps_star) == 1 and len(H.unit) == 1:
        (ei,) = eps_star
        (ui,) = H.unit
        gens = sorted(
            {idx(ei, j) for j in range(d)} | {idx(i, ui) for i in range(d)}
        )
        D.generators = gens

    # grouplike seeds: dual-side characters of H and H's own grouplikes
    extra = []
    if H.characters:
        for chi in H.characters:
            vec = {}
            for ui, cu in H.unit.items():
                for i in range(d):
                    if chi[i]:
                        vec[idx(i, ui)] = chi[i] * cu
            extra.append(vclean(vec))
    for g in H.grouplikes:
        vec = {}
        for gi, cg in g.items():
            for ei, ce in eps_star.items():
                vec[idx(ei, gi)] = vec.get(idx(ei, gi), 0) + cg * ce
        extra.append(vclean(vec))
    D._extra_grouplikes = extra
    return D


def _double_grouplikes(D):
    # extend the basis-element search with dual-character grouplikes
    base = HopfAlgebra.grouplikes.func(D)
    extra = getattr(D, "_extra_grouplikes", [])
    found = list(base)
    for v in extra:
        if D.is_grouplike(v) and all(not veq(v, w) for w in found):
            found.append(v)
    changed = True
    while changed:
        changed = False
        snapshot = list(found)
        for a in snapshot:
            for b in snapshot:
                p = D.mul(a, b)
                if all(not veq(p, w) for w in found):
                    found.append(p)
                    changed = True
    return found


def double_z2():
    D = drinfeld_double(group_z2(), name="double_z2")
    D.__dict__["grouplikes"] = _double_grouplikes(D)
    return D


def double_sweedler():
    """Double of the 4-dim Taft algebra: unimodular, balanced, not ribbon.

    Its Drinfeld element satisfies S(u) != u while every grouplike squares
    to the identity, so no u l^{-1} can be antipode-fixed: the algebra has
    no ribbon element at all.  It does carry a balanced twist (canonically
    nu = u (chi (x) 1), chi the sign character) with pivotal g = chi (x) 1,
    which is all that traces and mapping-class actions use; hence tier
    "balanced".
    """
    D = drinfeld_double(sweedler(), name="double_sweedler")
    D.twist_axioms = "balanced"
    D.__dict__["grouplikes"] = _double_grouplikes(D)
    return D


BUILTIN_NAMES = ("group_z2", "group_s3", "sweedler", "double_z2", "double_sweedler")

_BUILTIN_CACHE = {}


def builtin(name: str) -> HopfAlgebra:
    if name not in _BUILTIN_CACHE:
        factory = {
            "group_z2": group_z2,
            "group_s3": group_s3,
            "sweedler": sweedler,
            "double_z2": double_z2,
            "double_sweedler": double_sweedler,
        }.get(name)
        if factory is None:
            raise HopfError(f"unknown builtin algebra: {name}")
        _BUILTIN_CACHE[name] = factory()
    return _BUILTIN_CACHE[name]
