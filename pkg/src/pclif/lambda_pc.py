"""lambda^Pc: Pauli-typed terms with phases over lambda^C.

Closed terms normalise to ``<r> v`` (a phase and a lambda^C value); terms
with one free variable denote projective Cliffords. Type-checking enforces
the symplectic side conditions of case expressions by evaluating omega on
basis substitutions.
"""

from dataclasses import dataclass, field
import itertools

from .ring import Ring
from .pauli import PauliElement
from . import lambda_c as lc
from . import pauli as pl
from . import phase_space as ps
from . import encoding as en

# -- types ------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class PauliT:
    def __str__(self):
        return "Pauli"


@dataclass(frozen=True, slots=True)
class Prod:
    left: object
    right: object

    def __str__(self):
        left = f"({self.left})" if isinstance(self.left, Prod) else str(self.left)
        return f"{left} ** {self.right}"


Pauli = PauliT()


def qrank(q) -> int:
    return 1 if isinstance(q, PauliT) else qrank(q.left) + qrank(q.right)


def power(n: int):
    """Pauli^n, nested to the right."""
    if n < 1:
        raise ValueError("Pauli^n needs n >= 1")
    q = Pauli
    for _ in range(n - 1):
        q = Prod(Pauli, q)
    return q


def overline(q):
    if isinstance(q, PauliT):
        return lc.PAULI_C
    return lc.Sum(overline(q.left), overline(q.right))


def from_ctype(sigma):
    if sigma == lc.PAULI_C:
        return Pauli
    if isinstance(sigma, lc.Sum):
        return Prod(from_ctype(sigma.left), from_ctype(sigma.right))
    raise PTypeError(f"{sigma} is not the image of a Pauli type")


# -- expressions ------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class PVar:
    name: str


@dataclass(frozen=True, slots=True)
class PLet:
    name: str
    bound: object
    body: object


@dataclass(frozen=True, slots=True)
class Embed:
    """A closed lambda^C expression of type overline(Q)."""

    cexpr: object


@dataclass(frozen=True, slots=True)
class Phase:
    cexpr: object
    body: object


@dataclass(frozen=True, slots=True)
class Star:
    left: object
    right: object


@dataclass(frozen=True, slots=True)
class Pow:
    body: object
    r: int


@dataclass(frozen=True, slots=True)
class CaseXZ:
    scrut: object
    ex: object
    ez: object


@dataclass(frozen=True, slots=True)
class Inj:
    side: int
    body: object
    other: object  # the QType of the other component


@dataclass(frozen=True, slots=True)
class CaseProd:
    scrut: object
    x1: str
    e1: object
    x2: str
    e2: object


@dataclass(frozen=True, slots=True)
class Force:
    lifted: object


@dataclass(frozen=True, slots=True)
class Apply:
    fn: object
    arg: object


@dataclass(frozen=True, slots=True)
class ApplyInverse:
    fn: object
    arg: object


@dataclass(frozen=True, slots=True)
class Config:
    """The normal form <phase> value."""

    phase: int
    value: object


# -- non-linear values ------------------------------------------------------


class Lifted:
    """lift e : a suspended closed Pauli (not necessarily normalised)."""

    __slots__ = ("name", "qtype", "body", "checked")

    def __init__(self, name, qtype, body):
        self.name, self.qtype, self.body = name, qtype, body
        self.checked = False

    def __repr__(self):
        return f"Lifted({self.name})"


class CliffordFn:
    """lift (\\var. body) : a projective Clifford dom -o cod."""

    __slots__ = ("name", "var", "dom", "cod", "body", "checked", "ring_hint", "_encoding")

    def __init__(self, name, var, dom, cod, body):
        self.name, self.var, self.dom, self.cod, self.body = name, var, dom, cod, body
        self.checked = False
        self.ring_hint = None
        self._encoding = None

    def __repr__(self):
        return f"CliffordFn({self.name} : {self.dom} -o {self.cod})"


class PTypeError(TypeError):
    pass


class SideConditionError(PTypeError):
    def __init__(self, cond):
        self.cond = cond
        super().__init__(cond.describe())


@dataclass
class SideCondition:
    kind: str  # "case-xz" or "case-prod"
    where: str
    required: int
    got: int
    basis: tuple = ()

    @property
    def ok(self):
        return self.got == self.required

    def describe(self):
        at = f" at basis {', '.join(self.basis)}" if self.basis else ""
        verdict = "ok" if self.ok else "violated"
        return f"{self.kind} in {self.where}: omega = {self.got}, required {self.required}{at} ({verdict})"


# -- projection psi -----------------------------------------------------------


def psi_of(e):
    """The lambda^C term for the vector part of ``e`` (phases dropped)."""
    if isinstance(e, PVar):
        return lc.Var(e.name)
    if isinstance(e, PLet):
        return lc.Let(e.name, psi_of(e.bound), psi_of(e.body))
    if isinstance(e, Embed):
        return e.cexpr
    if isinstance(e, Config):
        return e.value
    if isinstance(e, Phase):
        return psi_of(e.body)
    if isinstance(e, Star):
        return lc.Add(psi_of(e.left), psi_of(e.right))
    if isinstance(e, Pow):
        return lc.ScalarMul(lc.Const(e.r), psi_of(e.body))
    if isinstance(e, CaseXZ):
        x1, x2 = lc.fresh("cx"), lc.fresh("cz")
        return lc.Case(psi_of(e.scrut),
                       x1, lc.ScalarMul(lc.Var(x1), psi_of(e.ex)),
                       x2, lc.ScalarMul(lc.Var(x2), psi_of(e.ez)))
    if isinstance(e, Inj):
        inner, pad = psi_of(e.body), lc.Zero(overline(e.other))
        return lc.Pair(inner, pad) if e.side == 1 else lc.Pair(pad, inner)
    if isinstance(e, CaseProd):
        return lc.Case(psi_of(e.scrut), e.x1, psi_of(e.e1), e.x2, psi_of(e.e2))
    if isinstance(e, Force):
        return psi_of(e.lifted.body)
    if isinstance(e, Apply):
        return lc.Let(e.fn.var, psi_of(e.arg), psi_of(e.fn.body))
    if isinstance(e, ApplyInverse):
        return lc.App(_pseudo_inverse(e.fn), psi_of(e.arg))
    raise PTypeError(f"not a Pc-expression: {e!r}")


def _pseudo_inverse(fn):
    """\\q. psi^-1 q as a lambda^C term built from omega against images of f."""
    ring = fn.ring_hint
    enc = to_encoding(fn, ring)
    sigma = overline(fn.cod)
    om = lc.build_omega(sigma, ring)
    q = lc.fresh("q")
    leaves = []
    for i in range(enc.n):
        bx = lc.unflatten(enc.psi[2 * i], sigma, ring)
        bz = lc.unflatten(enc.psi[2 * i + 1], sigma, ring)
        leaves.append(lc.App(lc.App(om, bz), lc.Var(q)))
        leaves.append(lc.App(lc.App(om, lc.Var(q)), bx))
    return lc.Lam(q, sigma, _tree(overline(fn.dom), iter(leaves)))


def _tree(ty, leaves):
    if isinstance(ty, lc.UnitT):
        return next(leaves)
    return lc.Pair(_tree(ty.left, leaves), _tree(ty.right, leaves))


# -- type checking ------------------------------------------------------------


class Checker:
    """Type checker; records every side condition it decides."""

    def __init__(self, ring: Ring, where: str = "<expr>"):
        self.ring = ring
        self.where = where
        self.conditions = []
        self._omega = {}

    def omega_term(self, sigma):
        if sigma not in self._omega:
            self._omega[sigma] = lc.build_omega(sigma, self.ring)
        return self._omega[sigma]

    def check_fn(self, fn):
        if fn.checked:
            return
        fn.ring_hint = self.ring
        saved, self.where = self.where, fn.name
        try:
            got = self.infer((fn.var, fn.dom), fn.body)
        finally:
            self.where = saved
        if got != fn.cod:
            raise PTypeError(f"{fn.name}: body has type {got}, declared {fn.cod}")
        fn.checked = True

    def check_lifted(self, lifted):
        if lifted.checked:
            return
        got = self.infer(None, lifted.body)
        if lifted.qtype is not None and got != lifted.qtype:
            raise PTypeError(f"{lifted.name}: has type {got}, declared {lifted.qtype}")
        lifted.qtype = got
        lifted.checked = True

    def _closed(self, theta, e, what):
        if theta is not None:
            raise PTypeError(f"{what} needs a closed context but {theta[0]} is free")

    def infer(self, theta, e):
        """Type of ``e`` under the single-variable context ``theta`` (or None)."""
        if isinstance(e, PVar):
            if theta is None or theta[0] != e.name:
                raise PTypeError(f"unbound or misplaced variable {e.name}")
            return theta[1]
        if isinstance(e, PLet):
            q = self.infer(theta, e.bound)
            return self.infer((e.name, q), e.body)
        if isinstance(e, Embed):
            self._closed(theta, e, "a constant Pauli")
            return from_ctype(lc.typecheck({}, e.cexpr))
        if isinstance(e, Config):
            self._closed(theta, e, "a value")
            return from_ctype(lc.typecheck({}, e.value))
        if isinstance(e, Phase):
            ctx = {} if theta is None else {theta[0]: overline(theta[1])}
            try:
                t = lc.typecheck(ctx, e.cexpr)
            except lc.CTypeError as err:
                raise PTypeError(f"phase expression: {err}") from None
            if t != lc.Unit:
                raise PTypeError(f"phase has type {t}, expected I")
            return self.infer(theta, e.body)
        if isinstance(e, Star):
            self._closed(theta, e, "*.*")
            a, b = self.infer(None, e.left), self.infer(None, e.right)
            if a != b:
                raise PTypeError(f"*.* operands differ: {a} vs {b}")
            return a
        if isinstance(e, Pow):
            self._closed(theta, e, "a power")
            return self.infer(None, e.body)
        if isinstance(e, CaseXZ):
            if self.infer(theta, e.scrut) != Pauli:
                raise PTypeError("case X/Z on a non-Pauli scrutinee")
            qx, qz = self.infer(None, e.ex), self.infer(None, e.ez)
            if qx != qz:
                raise PTypeError(f"case X/Z branches differ: {qx} vs {qz}")
            self._xz_condition(e, qx)
            return qx
        if isinstance(e, Inj):
            inner = self.infer(theta, e.body)
            return Prod(inner, e.other) if e.side == 1 else Prod(e.other, inner)
        if isinstance(e, CaseProd):
            q = self.infer(theta, e.scrut)
            if not isinstance(q, Prod):
                raise PTypeError(f"case on {q}, which is not a product")
            q1 = self.infer((e.x1, q.left), e.e1)
            q2 = self.infer((e.x2, q.right), e.e2)
            if q1 != q2:
                raise PTypeError(f"case branches differ: {q1} vs {q2}")
            self._prod_condition(e, q.left, q.right, q1)
            return q1
        if isinstance(e, Force):
            self._closed(theta, e, "force")
            self.check_lifted(e.lifted)
            return e.lifted.qtype
        if isinstance(e, (Apply, ApplyInverse)):
            self.check_fn(e.fn)
            inverse = isinstance(e, ApplyInverse)
            want = e.fn.cod if inverse else e.fn.dom
            got = self.infer(theta, e.arg)
            if got != want:
                raise PTypeError(f"{e.fn.name} expects {want}, got {got}")
            if inverse and qrank(e.fn.dom) != qrank(e.fn.cod):
                raise PTypeError(f"{e.fn.name} is not square, so it has no inverse")
            return e.fn.cod if not inverse else e.fn.dom
        raise PTypeError(f"not a Pc-expression: {e!r}")

    def _xz_condition(self, e, q):
        sigma = overline(q)
        term = lc.App(lc.App(self.omega_term(sigma), psi_of(e.ez)), psi_of(e.ex))
        got = lc.flatten(lc.evaluate(term, self.ring))[0]
        cond = SideCondition("case-xz", self.where, 1, got, ("Z", "X"))
        self.conditions.append(cond)
        if not cond.ok:
            raise SideConditionError(cond)

    def _prod_condition(self, e, q1, q2, qout):
        # omega(psi e1, psi e2) is bilinear in (x1, x2), so basis pairs decide it
        sigma = overline(qout)
        term = lc.App(lc.App(self.omega_term(sigma), psi_of(e.e1)), psi_of(e.e2))
        ctx = {e.x1: overline(q1), e.x2: overline(q2)}
        hit = lc.counterexample(ctx, term, lc.Const(0), lc.Unit, self.ring)
        if hit is None:
            self.conditions.append(SideCondition("case-prod", self.where, 0, 0))
            return
        sigma_sub, got, _ = hit
        names = tuple(f"{k}={ps.render(lc.flatten(v))}" for k, v in sigma_sub.items())
        cond = SideCondition("case-prod", self.where, 0, got[0], names)
        self.conditions.append(cond)
        raise SideConditionError(cond)


def typecheck(e, ring: Ring, theta=None):
    return Checker(ring).infer(theta, e)


# -- substitution and evaluation ---------------------------------------------


def subst(e, x, v):
    """e{v/x} for a closed lambda^C value v."""
    if isinstance(e, PVar):
        return Embed(v) if e.name == x else e
    if isinstance(e, PLet):
        body = e.body if e.name == x else subst(e.body, x, v)
        return PLet(e.name, subst(e.bound, x, v), body)
    if isinstance(e, Embed):
        return Embed(lc.subst(e.cexpr, x, v))
    if isinstance(e, Phase):
        return Phase(lc.subst(e.cexpr, x, v), subst(e.body, x, v))
    if isinstance(e, Star):
        return Star(subst(e.left, x, v), subst(e.right, x, v))
    if isinstance(e, Pow):
        return Pow(subst(e.body, x, v), e.r)
    if isinstance(e, CaseXZ):
        return CaseXZ(subst(e.scrut, x, v), e.ex, e.ez)
    if isinstance(e, Inj):
        return Inj(e.side, subst(e.body, x, v), e.other)
    if isinstance(e, CaseProd):
        e1 = e.e1 if e.x1 == x else subst(e.e1, x, v)
        e2 = e.e2 if e.x2 == x else subst(e.e2, x, v)
        return CaseProd(subst(e.scrut, x, v), e.x1, e1, e.x2, e2)
    if isinstance(e, (Apply, ApplyInverse)):
        return type(e)(e.fn, subst(e.arg, x, v))
    if isinstance(e, (Force, Config)):
        return e
    raise PTypeError(f"not a Pc-expression: {e!r}")


def _reshape(vec, like, ring):
    """Rebuild a value with the same tree shape as ``like``."""
    it = iter(vec)

    def go(t):
        if isinstance(t, lc.Const):
            return lc.Const(next(it) % ring.d)
        return lc.Pair(go(t.left), go(t.right))

    return go(like)


def to_element(c: Config, ring: Ring) -> PauliElement:
    return PauliElement(ring, c.phase, lc.flatten(c.value))


def from_element(p: PauliElement, q=None) -> Config:
    q = q if q is not None else power(p.rank)
    return Config(p.phase, lc.unflatten(p.vec, overline(q), p.ring))


def _step(e, ring):
    if isinstance(e, Embed):
        if lc.is_value(e.cexpr):
            return Config(0, lc.normalize_value(e.cexpr, ring))
        return Embed(lc._step(e.cexpr, ring))
    if isinstance(e, Phase):
        if not lc.is_value(e.cexpr):
            return Phase(lc._step(e.cexpr, ring), e.body)
        if not isinstance(e.body, Config):
            return Phase(e.cexpr, _step(e.body, ring))
        r = e.cexpr.value
        return Config((r + e.body.phase) % ring.d, e.body.value)
    if isinstance(e, PLet):
        if not isinstance(e.bound, Config):
            return PLet(e.name, _step(e.bound, ring), e.body)
        c = e.bound
        return Phase(lc.Const(c.phase), subst(e.body, e.name, c.value))
    if isinstance(e, Star):
        if not isinstance(e.left, Config):
            return Star(_step(e.left, ring), e.right)
        if not isinstance(e.right, Config):
            return Star(e.left, _step(e.right, ring))
        p = pl.cprod(to_element(e.left, ring), to_element(e.right, ring))
        return Config(p.phase, _reshape(p.vec, e.left.value, ring))
    if isinstance(e, Pow):
        if not isinstance(e.body, Config):
            return Pow(_step(e.body, ring), e.r)
        p = pl.pow(to_element(e.body, ring), e.r)
        return Config(p.phase, _reshape(p.vec, e.body.value, ring))
    if isinstance(e, CaseXZ):
        if not isinstance(e.scrut, Config):
            return CaseXZ(_step(e.scrut, ring), e.ex, e.ez)
        rx, rz = lc.flatten(e.scrut.value)
        k = ring.sgn(ring.lift(rx) * ring.lift(rz))
        phase = (e.scrut.phase + ring.half(k)) % ring.d
        return Phase(lc.Const(phase), Star(Pow(e.ez, rz), Pow(e.ex, rx)))
    if isinstance(e, Inj):
        if not isinstance(e.body, Config):
            return Inj(e.side, _step(e.body, ring), e.other)
        pad = lc.zero_value(overline(e.other))
        v = e.body.value
        return Config(e.body.phase, lc.Pair(v, pad) if e.side == 1 else lc.Pair(pad, v))
    if isinstance(e, CaseProd):
        if not isinstance(e.scrut, Config):
            return CaseProd(_step(e.scrut, ring), e.x1, e.e1, e.x2, e.e2)
        c = e.scrut
        v1, v2 = c.value.left, c.value.right
        return Phase(lc.Const(c.phase), Star(subst(e.e1, e.x1, v1), subst(e.e2, e.x2, v2)))
    if isinstance(e, Force):
        return e.lifted.body
    if isinstance(e, Apply):
        if not isinstance(e.arg, Config):
            return Apply(e.fn, _step(e.arg, ring))
        c = e.arg
        return Phase(lc.Const(c.phase), subst(e.fn.body, e.fn.var, c.value))
    if isinstance(e, ApplyInverse):
        if not isinstance(e.arg, Config):
            return ApplyInverse(e.fn, _step(e.arg, ring))
        p = apply_inverse(e.fn, to_element(e.arg, ring), ring)
        return from_element(p, e.fn.dom)
    raise lc.StuckError(f"no rule applies to {e!r}")


def step(e, ring: Ring):
    if isinstance(e, Config):
        return lc.Done(e)
    return _step(e, ring)


def evaluate(e, ring: Ring, budget: int = lc.DEFAULT_BUDGET, on_step=None) -> Config:
    for _ in range(budget):
        if isinstance(e, Config):
            return e
        e = _step(e, ring)
        if on_step is not None:
            on_step(e)
    raise lc.BudgetExceeded(f"no normal form after {budget} steps")


def run(e, ring: Ring) -> PauliElement:
    return to_element(evaluate(e, ring), ring)


# -- Cliffords as programs ----------------------------------------------------


def apply(fn: CliffordFn, p: PauliElement) -> PauliElement:
    return run(Apply(fn, from_element(p, fn.dom)), p.ring)


def to_encoding(fn: CliffordFn, ring: Ring) -> en.CondensedEncoding:
    """Read (mu, psi) off the images of the basis Paulis."""
    if fn._encoding is not None and fn._encoding.ring == ring:
        return fn._encoding
    Checker(ring).check_fn(fn)
    sigma = overline(fn.dom)
    mu, cols = [], []
    for b in lc.basis_values(sigma):
        c = evaluate(Apply(fn, Config(0, b)), ring)
        mu.append(c.phase)
        cols.append(lc.flatten(c.value))
    enc = en.CondensedEncoding(ring, tuple(mu), tuple(cols))
    assert en.is_symplectic(enc), f"{fn.name} checked but its psi is not symplectic"
    fn._encoding = enc
    return enc


def compile_frame(fn: CliffordFn, ring: Ring) -> en.Frame:
    """Frame by recursion on the domain: split products through in1/in2."""
    Checker(ring).check_fn(fn)
    return en.Frame(tuple(_compile(fn, ring)))


def _compile(fn, ring):
    if isinstance(fn.dom, PauliT):
        rows = []
        for name in ("X", "Z"):
            b = lc.unflatten(pl.NAMES[name], lc.PAULI_C, ring)
            rows.append(run(Apply(fn, Config(0, b)), ring))
        return [tuple(rows)]
    q = fn.var + "#"
    left = CliffordFn(f"{fn.name}.1", q, fn.dom.left, fn.cod,
                      Apply(fn, Inj(1, PVar(q), fn.dom.right)))
    right = CliffordFn(f"{fn.name}.2", q, fn.dom.right, fn.cod,
                       Apply(fn, Inj(2, PVar(q), fn.dom.left)))
    return _compile(left, ring) + _compile(right, ring)


def apply_inverse(fn: CliffordFn, p: PauliElement, ring: Ring) -> PauliElement:
    """f^-1(<r> v) = <r - s> w with w = psi^-1 v and f(w) = <s> v."""
    enc = to_encoding(fn, ring)
    if enc.n != enc.m:
        raise en.EncodingError(f"{fn.name} is not square")
    w = en.inverse_psi(enc, p.vec)
    fw = apply(fn, PauliElement(ring, 0, w))
    assert fw.vec == p.vec, "psi^-1 did not invert psi"
    return PauliElement(ring, p.phase - fw.phase, w)


def identity_clifford(q, name="id"):
    return CliffordFn(name, "q", q, q, PVar("q"))


def pauli_to_clifford(p: PauliElement, q=None, name=None) -> CliffordFn:
    """Conjugation by p: q |-> <omega(p, q)> q."""
    q = q if q is not None else power(p.rank)
    sigma = overline(q)
    pv = lc.unflatten(p.vec, sigma, p.ring)
    phase = lc.App(lc.App(lc.build_omega(sigma, p.ring), pv), lc.Var("q"))
    return CliffordFn(name or f"pauliToClifford({pl.render(p)})", "q", q, q, Phase(phase, PVar("q")))


def compose_clifford(f: CliffordFn, g: CliffordFn, name=None) -> CliffordFn:
    """The program q |-> g (f q)."""
    if f.cod != g.dom:
        raise PTypeError(f"cannot compose {f.cod} output with {g.dom} input")
    return CliffordFn(name or f"compose({f.name},{g.name})", "q", f.dom, g.cod,
                      Apply(g, Apply(f, PVar("q"))))


def parallel_clifford(f: CliffordFn, g: CliffordFn, name=None) -> CliffordFn:
    """f on the left factor, g on the right."""
    body = CaseProd(PVar("q"),
                    "q1", Inj(1, Apply(f, PVar("q1")), g.cod),
                    "q2", Inj(2, Apply(g, PVar("q2")), f.cod))
    return CliffordFn(name or f"parallel({f.name},{g.name})", "q",
                      Prod(f.dom, g.dom), Prod(f.cod, g.cod), body)


# -- rendering ----------------------------------------------------------------


def render_vector(vec, q) -> str:
    """Structured ``P ** P`` form; nested left factors get parentheses."""
    vec = list(vec)

    def go(t, i):
        if isinstance(t, PauliT):
            return pl.site_name(vec[i : i + 2]), i + 2
        left, i = go(t.left, i)
        right, i = go(t.right, i)
        if isinstance(t.left, Prod):
            left = f"({left})"
        return f"{left} ** {right}", i

    return go(q, 0)[0]


def render(p: PauliElement, q=None) -> str:
    q = q if q is not None else power(p.rank)
    return pl.render_phase(p.phase) + render_vector(p.vec, q)
