"""Quantum torus algebra, its meromorphic extension, and graded automorphisms.

Two layers:

* the formal quantum torus: finite sums over lattice classes with Laurent
  coefficients in q^(1/2), product y_g1 * y_g2 = q^(<g1,g2>/2) y_{g1+g2};

* the extended algebra: finite sums over magnetic classes delta with
  coefficients that are evaluable meromorphic expressions f(tau, theta),
  theta in the electric dual space, twisted product

      (f1 . y_d1) * (f2 . y_d2) = f1(tau,theta) f2(tau,theta + tau<d1,->) . y_{d1+d2}.

Coefficient functions are immutable expression DAGs with exact symbolic
theta-shifts and numeric evaluation; function equality is decided
numerically at seeded sample points (true meromorphic-identity checking is
not attempted).  Automorphisms are stored by their multipliers on the
magnetic basis generators plus an optional theta-translation; this is
complete data for the grading-preserving, degree-0-trivial automorphisms
used here.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .bps import EMSplitting, RefinedBPSStructure, Ray, QuadraticRefinement, kappa_set, classify
from .signals import DomainError, PoleSignal, UnsupportedRegimeError

__all__ = [
    "Expr",
    "const",
    "tau",
    "theta",
    "exp_",
    "log_",
    "powi",
    "powc",
    "lam_",
    "f2_",
    "eq_",
    "shift",
    "eval_expr",
    "TorusElement",
    "qt_mul",
    "TorusContext",
    "ExtendedElement",
    "ext_mul",
    "embed",
    "GradedAutomorphism",
    "eps_z",
    "s_q_ray",
    "ad",
    "compose",
    "expr_to_dict",
    "expr_from_dict",
    "extended_to_dict",
    "extended_from_dict",
    "automorphism_to_dict",
    "automorphism_from_dict",
]

Vec = tuple[int, ...]

_TWO_PI_I = 2j * math.pi


# ---------------------------------------------------------------------------
# coefficient-function expression DAG


@dataclass(frozen=True)
class Expr:
    kind: str
    children: tuple["Expr", ...] = ()
    payload: tuple = ()

    def __add__(self, other):
        return Expr("add", (self, _wrap(other)))

    def __radd__(self, other):
        return Expr("add", (_wrap(other), self))

    def __sub__(self, other):
        return Expr("add", (self, Expr("neg", (_wrap(other),))))

    def __rsub__(self, other):
        return Expr("add", (_wrap(other), Expr("neg", (self,))))

    def __mul__(self, other):
        return Expr("mul", (self, _wrap(other)))

    def __rmul__(self, other):
        return Expr("mul", (_wrap(other), self))

    def __truediv__(self, other):
        return Expr("div", (self, _wrap(other)))

    def __rtruediv__(self, other):
        return Expr("div", (_wrap(other), self))

    def __neg__(self):
        return Expr("neg", (self,))


def _wrap(v) -> Expr:
    if isinstance(v, Expr):
        return v
    return const(v)


def const(v) -> Expr:
    if isinstance(v, Fraction):
        return Expr("const", payload=(v,))
    return Expr("const", payload=(complex(v),))


def tau() -> Expr:
    return Expr("tau")


def theta(coeffs) -> Expr:
    """The linear functional theta(gamma_e), gamma_e given by electric coords."""
    return Expr("theta", payload=(tuple(int(c) for c in coeffs),))


def exp_(a) -> Expr:
    return Expr("exp", (_wrap(a),))


def log_(a) -> Expr:
    return Expr("log", (_wrap(a),))


def powi(a, n: int) -> Expr:
    return Expr("powi", (_wrap(a),), payload=(int(n),))


def powc(a, b) -> Expr:
    """General power a^b = exp(b * Log a), principal branch."""
    return Expr("pow", (_wrap(a), _wrap(b)))


def lam_(w, eta, omega) -> Expr:
    return Expr("lam", (_wrap(w), _wrap(eta), _wrap(omega)))


def f2_(w, eta, omega1, omega2) -> Expr:
    return Expr("f2", (_wrap(w), _wrap(eta), _wrap(omega1), _wrap(omega2)))


def eq_(q, x) -> Expr:
    return Expr("eq", (_wrap(q), _wrap(x)))


def shift(a, delta_pair=None, const_vec=None) -> Expr:
    """Substitution theta -> theta + tau * delta_pair + const_vec.

    delta_pair holds the integers <delta, e_i> on the electric basis.
    Composes associatively on evaluations: shift(a) o shift(b) = shift(a+b).
    """
    a = _wrap(a)
    dp = tuple(int(c) for c in (delta_pair or ()))
    cv = tuple(complex(c) for c in (const_vec or ()))
    if not any(dp) and not any(cv):
        return a
    return Expr("shift", (a,), payload=(dp, cv))


def eval_expr(node: Expr, tau_val: complex, theta_val) -> complex:
    """Evaluate at (tau, theta); theta is a vector over the electric basis."""
    th = tuple(complex(t) for t in theta_val)
    return _eval(node, complex(tau_val), th, {})


def _eval(node: Expr, tv: complex, th: tuple[complex, ...], memo: dict) -> complex:
    key = (id(node), th)
    hit = memo.get(key)
    if hit is not None:
        return hit
    kind = node.kind
    if kind == "const":
        val = complex(node.payload[0])
    elif kind == "tau":
        val = tv
    elif kind == "theta":
        coeffs = node.payload[0]
        val = sum((c * th[i] for i, c in enumerate(coeffs)), 0j)
    elif kind == "add":
        val = _eval(node.children[0], tv, th, memo) + _eval(node.children[1], tv, th, memo)
    elif kind == "neg":
        val = -_eval(node.children[0], tv, th, memo)
    elif kind == "mul":
        val = _eval(node.children[0], tv, th, memo) * _eval(node.children[1], tv, th, memo)
    elif kind == "div":
        den = _eval(node.children[1], tv, th, memo)
        if den == 0:
            raise PoleSignal("pole", 0j, "expr-div")
        val = _eval(node.children[0], tv, th, memo) / den
    elif kind == "exp":
        val = cmath.exp(_eval(node.children[0], tv, th, memo))
    elif kind == "log":
        arg = _eval(node.children[0], tv, th, memo)
        if arg == 0:
            raise PoleSignal("pole", 0j, "expr-log")
        val = cmath.log(arg)
    elif kind == "powi":
        base = _eval(node.children[0], tv, th, memo)
        n = node.payload[0]
        if n < 0 and base == 0:
            raise PoleSignal("pole", 0j, "expr-powi")
        val = base**n
    elif kind == "pow":
        base = _eval(node.children[0], tv, th, memo)
        if base == 0:
            raise PoleSignal("pole", 0j, "expr-pow")
        val = cmath.exp(_eval(node.children[1], tv, th, memo) * cmath.log(base))
    elif kind == "lam":
        from .special import lambda_fn

        val = lambda_fn(*(_eval(c, tv, th, memo) for c in node.children))
    elif kind == "f2":
        from .special import f_fn

        val = f_fn(*(_eval(c, tv, th, memo) for c in node.children))
    elif kind == "eq":
        from .special import quantum_dilog

        val = quantum_dilog(*(_eval(c, tv, th, memo) for c in node.children))
    elif kind == "shift":
        dp, cv = node.payload
        new_th = list(th)
        for i, c in enumerate(dp):
            new_th[i] += tv * c
        for i, c in enumerate(cv):
            new_th[i] += c
        val = _eval(node.children[0], tv, tuple(new_th), memo)
    else:
        raise ValueError(f"unknown expression node kind {kind!r}")
    memo[key] = val
    return val


# ---------------------------------------------------------------------------
# formal quantum torus


@dataclass
class TorusElement:
    """Finite sum over lattice classes with Laurent-in-q^(1/2) coefficients.

    terms maps a lattice vector to {k: c}, the coefficient sum c q^(k/2).
    """

    rank: int
    terms: dict

    @classmethod
    def generator(cls, gamma: Vec, k: int = 0, c: complex = 1.0) -> "TorusElement":
        return cls(len(gamma), {tuple(gamma): {int(k): complex(c)}})

    def __eq__(self, other):
        if not isinstance(other, TorusElement):
            return NotImplemented
        return self.rank == other.rank and _clean(self.terms) == _clean(other.terms)

    def __add__(self, other):
        if self.rank != other.rank:
            raise DomainError("rank mismatch")
        out = {g: dict(c) for g, c in self.terms.items()}
        for g, lq in other.terms.items():
            tgt = out.setdefault(g, {})
            for k, c in lq.items():
                tgt[k] = tgt.get(k, 0j) + c
        return TorusElement(self.rank, _clean(out))


def _clean(terms: dict) -> dict:
    out = {}
    for g, lq in terms.items():
        kept = {k: c for k, c in lq.items() if c != 0}
        if kept:
            out[g] = kept
    return out


def qt_mul(a: TorusElement, b: TorusElement, skew) -> TorusElement:
    """Product with the q^(<g1,g2>/2) twist in the y-generators."""
    if a.rank != b.rank:
        raise DomainError("rank mismatch")
    n = a.rank
    out: dict = {}
    for g1, lq1 in a.terms.items():
        for g2, lq2 in b.terms.items():
            tw = sum(g1[i] * skew[i][j] * g2[j] for i in range(n) for j in range(n))
            g = tuple(x + y for x, y in zip(g1, g2))
            tgt = out.setdefault(g, {})
            for k1, c1 in lq1.items():
                for k2, c2 in lq2.items():
                    k = k1 + k2 + tw
                    tgt[k] = tgt.get(k, 0j) + c1 * c2
    return TorusElement(n, _clean(out))


# ---------------------------------------------------------------------------
# extended algebra


@dataclass(frozen=True)
class TorusContext:
    """Skew form plus electric/magnetic splitting shared by extended objects."""

    skew: tuple[tuple[int, ...], ...]
    splitting: EMSplitting

    def pair_vec(self, mag_coords: Vec) -> Vec:
        """<delta, e_i> for each electric basis vector, delta in magnetic coords."""
        delta = self.splitting.magnetic_vector(tuple(mag_coords))
        n = len(delta)
        out = []
        for e in self.splitting.electric:
            out.append(sum(delta[i] * self.skew[i][j] * e[j] for i in range(n) for j in range(n)))
        return tuple(out)

    @property
    def mag_rank(self) -> int:
        return len(self.splitting.magnetic)


def context_for(b: RefinedBPSStructure, s: EMSplitting) -> TorusContext:
    return TorusContext(b.skew, s)


@dataclass
class ExtendedElement:
    """Finite sum over magnetic coordinates with Expr coefficients."""

    ctx: TorusContext
    terms: dict  # Vec (magnetic coords) -> Expr

    @classmethod
    def scalar(cls, ctx: TorusContext, f) -> "ExtendedElement":
        return cls(ctx, {(0,) * ctx.mag_rank: _wrap(f)})

    @classmethod
    def magnetic_generator(cls, ctx: TorusContext, coords: Vec, f=1) -> "ExtendedElement":
        return cls(ctx, {tuple(coords): _wrap(f)})

    def coefficient(self, coords: Vec) -> Expr:
        return self.terms.get(tuple(coords), const(0))

    def eval_coefficient(self, coords: Vec, tau_val, theta_val) -> complex:
        return eval_expr(self.coefficient(coords), tau_val, theta_val)

    def __mul__(self, other):
        return ext_mul(self, other)


def ext_mul(a: ExtendedElement, b: ExtendedElement) -> ExtendedElement:
    """Twisted product: the right factor's theta is shifted by tau<delta1,->."""
    if a.ctx != b.ctx:
        raise DomainError("elements live over different splittings")
    out: dict = {}
    for d1, f1 in a.terms.items():
        pv = a.ctx.pair_vec(d1)
        for d2, f2 in b.terms.items():
            d = tuple(x + y for x, y in zip(d1, d2))
            term = f1 * shift(f2, pv)
            out[d] = out[d] + term if d in out else term
    return ExtendedElement(a.ctx, out)


def embed(b: RefinedBPSStructure, s: EMSplitting, a: TorusElement) -> ExtendedElement:
    """The injective homomorphism I of the torus into the extended algebra:

        q^(k/2) y_{ge+gm}  |->  exp(pi i (k + <gm,ge>) tau + 2 pi i theta(ge)) . y_gm.
    """
    ctx = context_for(b, s)
    out: dict = {}
    for g, lq in a.terms.items():
        ge_coords, gm_coords = s.decompose(g)
        ge = s.electric_vector(ge_coords)
        gm = s.magnetic_vector(gm_coords)
        mm = b.pairing(gm, ge)
        for k, c in lq.items():
            f = const(c) * exp_(
                const(1j * math.pi * (k + mm)) * tau() + const(_TWO_PI_I) * theta(ge_coords)
            )
            out[gm_coords] = out[gm_coords] + f if gm_coords in out else f
    return ExtendedElement(ctx, out)


# ---------------------------------------------------------------------------
# graded automorphisms


@dataclass
class GradedAutomorphism:
    """Grading-preserving automorphism, stored by generator data.

    Acts as A(f . y_delta) = f(tau, theta + translation) * m_delta(tau, theta) . y_delta,
    where m_delta is built multiplicatively (with twisted-product shifts)
    from the multipliers on the magnetic basis generators.  translation=None
    means the automorphism is trivial on the degree-0 subalgebra.
    """

    ctx: TorusContext
    multipliers: tuple  # Expr per magnetic basis vector
    translation: tuple | None = None  # complex per electric basis vector

    def multiplier_for(self, coords: Vec) -> Expr:
        acc = (0,) * self.ctx.splitting.theta_space_dim
        result = const(1)
        basis_pairs = [self.ctx.pair_vec(tuple(1 if i == j else 0 for i in range(self.ctx.mag_rank)))
                       for j in range(self.ctx.mag_rank)]
        for j, power in enumerate(coords):
            pv = basis_pairs[j]
            for _ in range(power if power > 0 else 0):
                result = result * shift(self.multipliers[j], acc)
                acc = tuple(x + y for x, y in zip(acc, pv))
            for _ in range(-power if power < 0 else 0):
                acc = tuple(x - y for x, y in zip(acc, pv))
                result = result * powi(shift(self.multipliers[j], acc), -1)
        return result

    def apply(self, el: ExtendedElement) -> ExtendedElement:
        if el.ctx != self.ctx:
            raise DomainError("element lives over a different splitting")
        out = {}
        for d, f in el.terms.items():
            g = shift(f, None, self.translation) if self.translation else f
            out[d] = g * self.multiplier_for(d)
        return ExtendedElement(self.ctx, out)


def compose(a: GradedAutomorphism, b: GradedAutomorphism) -> GradedAutomorphism:
    """The automorphism 'a after b'."""
    if a.ctx != b.ctx:
        raise DomainError("automorphisms live over different splittings")
    tr_a = a.translation
    tr = None
    if tr_a or b.translation:
        k = a.ctx.splitting.theta_space_dim
        za = tr_a or (0j,) * k
        zb = b.translation or (0j,) * k
        tr = tuple(x + y for x, y in zip(za, zb))
    mult = tuple(
        shift(mb, None, tr_a) * ma if tr_a else mb * ma
        for ma, mb in zip(a.multipliers, b.multipliers)
    )
    return GradedAutomorphism(a.ctx, mult, tr)


def eps_z(b: RefinedBPSStructure, s: EMSplitting, t: complex) -> GradedAutomorphism:
    """The automorphism eps_Z(t): y_gamma -> exp(Z(gamma)/t) y_gamma.

    On the extended algebra: theta-translation by Z(e_i)/(2 pi i t) on the
    coefficients, together with the scalar multiplier exp(Z(delta)/t) on
    each magnetic generator (the lift of eps_Z to all of the lattice).
    """
    t = complex(t)
    if t == 0:
        raise DomainError("t must be non-zero")
    ctx = context_for(b, s)
    translation = tuple(
        b.charge(e) / (_TWO_PI_I * t) for e in s.electric
    )
    mult = tuple(const(cmath.exp(b.charge(d) / t)) for d in s.magnetic)
    return GradedAutomorphism(ctx, mult, translation)


def s_q_ray(
    b: RefinedBPSStructure,
    s: EMSplitting,
    sigma: QuadraticRefinement,
    ray: Ray,
    inverse: bool = False,
) -> GradedAutomorphism:
    """Wall-crossing automorphism of an active ray, by its closed form.

    Multiplier on a magnetic generator beta:

        prod over active gamma on the ray, Laurent index n, lambda in
        kappa(beta, gamma) of
            (1 + q^(n/2+lambda) y_gamma)^(-Omega_n(gamma) eps(beta,gamma)),

    realised through the embedding: q^(n/2+lambda) y_gamma evaluates to
    exp(pi i (n+2 lambda) tau + 2 pi i theta(gamma)).  Requires the four
    classification predicates and integer Omega_n; the refinement must
    satisfy sigma(gamma) = (-1)^(n+1) on the support.

    inverse=True flips the crossing orientation (negated exponents); the
    two orientations compose to the identity.
    """
    for g, om in b.invariants.items():
        if not om.integral:
            raise UnsupportedRegimeError("integer invariants required for integer exponents")
    if not classify(b).all:
        raise DomainError("wall-crossing closed form needs finite/uncoupled/palindromic/integral")
    ctx = context_for(b, s)
    for g in ray.classes:
        om = b.omega(g)
        if not om:
            raise DomainError(f"{g} is not an active class")
        for n, c in om.items():
            if sigma(g) != (-1) ** ((n + 1) % 2):
                raise DomainError(f"refinement violates the support sign rule at {g}, n={n}")
    mults = []
    for j in range(ctx.mag_rank):
        beta = s.magnetic[j]
        m = const(1)
        for g in ray.classes:
            eps, kappas = kappa_set(b, beta, g)
            if eps == 0:
                continue
            ge_coords, gm_coords = s.decompose(g)
            if any(gm_coords):
                raise DomainError(f"active class {g} is not electric")
            for n, c in b.omega(g).items():
                expo = -int(c) * eps
                if inverse:
                    expo = -expo
                for lam in kappas:
                    half = int(n + 2 * lam)  # n + 2*lambda is an integer
                    factor = powi(
                        const(1)
                        + exp_(
                            const(1j * math.pi * half) * tau()
                            + const(_TWO_PI_I) * theta(ge_coords)
                        ),
                        expo,
                    )
                    m = m * factor
        mults.append(m)
    return GradedAutomorphism(ctx, tuple(mults), None)


def ad(u: Expr, ctx: TorusContext) -> GradedAutomorphism:
    """Conjugation by an invertible degree-0 element u(tau, theta):

        Ad_u (f . y_delta) = f * u(tau,theta) u(tau, theta + tau<delta,->)^(-1) . y_delta.
    """
    mults = []
    for j in range(ctx.mag_rank):
        pv = ctx.pair_vec(tuple(1 if i == j else 0 for i in range(ctx.mag_rank)))
        mults.append(_wrap(u) * powi(shift(u, pv), -1))
    return GradedAutomorphism(ctx, tuple(mults), None)


# ---------------------------------------------------------------------------
# JSON serialisation (expression trees with named node kinds, shared nodes)


def expr_to_dict(root: Expr) -> dict:
    nodes: list[dict] = []
    index: dict[int, int] = {}

    def visit(node: Expr) -> int:
        if id(node) in index:
            return index[id(node)]
        children = [visit(c) for c in node.children]
        doc: dict = {"kind": node.kind, "children": children}
        if node.kind == "const":
            v = node.payload[0]
            if isinstance(v, Fraction):
                doc["value"] = {"type": "rational", "v": f"{v.numerator}/{v.denominator}"}
            else:
                doc["value"] = {"type": "complex", "re": v.real, "im": v.imag}
        elif node.kind == "theta":
            doc["coeffs"] = list(node.payload[0])
        elif node.kind == "powi":
            doc["n"] = node.payload[0]
        elif node.kind == "shift":
            dp, cv = node.payload
            doc["delta"] = list(dp)
            doc["const"] = [[c.real, c.imag] for c in cv]
        nodes.append(doc)
        index[id(node)] = len(nodes) - 1
        return index[id(node)]

    root_idx = visit(root)
    return {"nodes": nodes, "root": root_idx}


def expr_from_dict(doc: dict) -> Expr:
    built: list[Expr] = []
    for nd in doc["nodes"]:
        kind = nd["kind"]
        children = tuple(built[i] for i in nd["children"])
        if kind == "const":
            v = nd["value"]
            if v["type"] == "rational":
                num, den = v["v"].split("/")
                payload = (Fraction(int(num), int(den)),)
            else:
                payload = (complex(v["re"], v["im"]),)
            built.append(Expr("const", children, payload))
        elif kind == "theta":
            built.append(Expr("theta", children, (tuple(nd["coeffs"]),)))
        elif kind == "powi":
            built.append(Expr("powi", children, (int(nd["n"]),)))
        elif kind == "shift":
            dp = tuple(int(x) for x in nd["delta"])
            cv = tuple(complex(re, im) for re, im in nd["const"])
            built.append(Expr("shift", children, (dp, cv)))
        else:
            built.append(Expr(kind, children))
    return built[doc["root"]]


def _ctx_to_dict(ctx: TorusContext) -> dict:
    return {
        "skew": [list(r) for r in ctx.skew],
        "electric": [list(v) for v in ctx.splitting.electric],
        "magnetic": [list(v) for v in ctx.splitting.magnetic],
    }


def _ctx_from_dict(doc: dict) -> TorusContext:
    return TorusContext(
        tuple(tuple(int(x) for x in r) for r in doc["skew"]),
        EMSplitting(
            tuple(tuple(int(x) for x in v) for v in doc["electric"]),
            tuple(tuple(int(x) for x in v) for v in doc["magnetic"]),
        ),
    )


def extended_to_dict(el: ExtendedElement) -> dict:
    return {
        "context": _ctx_to_dict(el.ctx),
        "terms": [
            {"delta": list(d), "coeff": expr_to_dict(f)} for d, f in sorted(el.terms.items())
        ],
    }


def extended_from_dict(doc: dict) -> ExtendedElement:
    ctx = _ctx_from_dict(doc["context"])
    return ExtendedElement(
        ctx,
        {tuple(int(x) for x in e["delta"]): expr_from_dict(e["coeff"]) for e in doc["terms"]},
    )


def automorphism_to_dict(a: GradedAutomorphism) -> dict:
    return {
        "context": _ctx_to_dict(a.ctx),
        "multipliers": [expr_to_dict(m) for m in a.multipliers],
        "translation": None
        if a.translation is None
        else [[c.real, c.imag] for c in a.translation],
    }


def automorphism_from_dict(doc: dict) -> GradedAutomorphism:
    ctx = _ctx_from_dict(doc["context"])
    tr = doc["translation"]
    return GradedAutomorphism(
        ctx,
        tuple(expr_from_dict(m) for m in doc["multipliers"]),
        None if tr is None else tuple(complex(re, im) for re, im in tr),
    )


def dumps_extended(el: ExtendedElement) -> str:
    return json.dumps(extended_to_dict(el), indent=2, sort_keys=True)


def loads_extended(text: str) -> ExtendedElement:
    return extended_from_dict(json.loads(text))
