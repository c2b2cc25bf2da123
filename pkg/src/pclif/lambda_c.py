"""The linear calculus lambda^C: syntax, linear typing, call-by-value evaluation.

Closed terms of type ``a -o b`` denote Z_d-linear maps. Evaluation is by
textual substitution; only closed values are ever substituted, so the one
place that needs renaming is the addition of two lambdas.
"""

from dataclasses import dataclass
import itertools

from .ring import Ring

# -- types ------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class UnitT:
    def __str__(self):
        return "I"


@dataclass(frozen=True, slots=True)
class Sum:
    left: object
    right: object

    def __str__(self):
        return f"({self.left} + {self.right})"


@dataclass(frozen=True, slots=True)
class Arrow:
    dom: object
    cod: object

    def __str__(self):
        return f"({self.dom} -o {self.cod})"


Unit = UnitT()
PAULI_C = Sum(Unit, Unit)


def rank(ty) -> int:
    if ty is Unit or isinstance(ty, UnitT):
        return 1
    if isinstance(ty, Sum):
        return rank(ty.left) + rank(ty.right)
    raise CTypeError(f"rank of higher-order type {ty}")


def first_order(ty) -> bool:
    if isinstance(ty, UnitT):
        return True
    if isinstance(ty, Sum):
        return first_order(ty.left) and first_order(ty.right)
    return False


def is_symplectic_type(ty) -> bool:
    if ty == PAULI_C:
        return True
    return isinstance(ty, Sum) and is_symplectic_type(ty.left) and is_symplectic_type(ty.right)


# -- expressions ------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class Let:
    name: str
    bound: object
    body: object


@dataclass(frozen=True, slots=True)
class Const:
    value: int


@dataclass(frozen=True, slots=True)
class ScalarMul:
    scalar: object
    body: object


@dataclass(frozen=True, slots=True)
class Zero:
    ty: object


@dataclass(frozen=True, slots=True)
class Add:
    left: object
    right: object


@dataclass(frozen=True, slots=True)
class Pair:
    left: object
    right: object


@dataclass(frozen=True, slots=True)
class Case:
    scrut: object
    x1: str
    a1: object
    x2: str
    a2: object


@dataclass(frozen=True, slots=True)
class Lam:
    name: str
    ty: object
    body: object


@dataclass(frozen=True, slots=True)
class App:
    fn: object
    arg: object


class CTypeError(TypeError):
    pass


class StuckError(RuntimeError):
    """A closed well-typed term failed to step; progress would be violated."""


class BudgetExceeded(RuntimeError):
    pass


_fresh = itertools.count()


def fresh(base="x") -> str:
    # '#' cannot appear in surface identifiers
    return f"{base.split('#')[0]}#{next(_fresh)}"


def show(e) -> str:
    """Compact concrete syntax, for diagnostics."""
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Const):
        return str(e.value)
    if isinstance(e, Zero):
        return "0"
    if isinstance(e, Pair):
        return f"[{show(e.left)}, {show(e.right)}]"
    if isinstance(e, Add):
        return f"({show(e.left)} + {show(e.right)})"
    if isinstance(e, ScalarMul):
        return f"({show(e.scalar)} . {show(e.body)})"
    if isinstance(e, Let):
        return f"(let {e.name} = {show(e.bound)} in {show(e.body)})"
    if isinstance(e, Case):
        return f"(case {show(e.scrut)} of inl {e.x1} -> {show(e.a1)} | inr {e.x2} -> {show(e.a2)})"
    if isinstance(e, Lam):
        return f"(\\{e.name}:{e.ty}. {show(e.body)})"
    if isinstance(e, App):
        return f"({show(e.fn)} {show(e.arg)})"
    return repr(e)


# -- typing -----------------------------------------------------------------
#
# infer returns (type, used, absorbs): ``used`` is the least linear context
# the term can be typed in, and ``absorbs`` says whether any larger context
# also works (true exactly when a Zero, or a constant 0, sits in a position
# that can swallow extra variables). Multiplicative rules need disjoint used
# sets; additive rules need each side to absorb what only the other uses.

_EMPTY = frozenset()


def _infer(e, env):
    if isinstance(e, Var):
        try:
            return env[e.name], frozenset((e.name,)), False
        except KeyError:
            raise CTypeError(f"unbound variable {e.name}") from None
    if isinstance(e, Const):
        return Unit, _EMPTY, e.value == 0
    if isinstance(e, Zero):
        return e.ty, _EMPTY, True
    if isinstance(e, (Add, Pair)):
        ta, ua, aa = _infer(e.left, env)
        tb, ub, ab = _infer(e.right, env)
        if isinstance(e, Add) and ta != tb:
            raise CTypeError(f"cannot add {ta} and {tb}")
        _share(ua, aa, ub, ab, e)
        ty = ta if isinstance(e, Add) else Sum(ta, tb)
        return ty, ua | ub, aa and ab
    if isinstance(e, ScalarMul):
        ts, us, as_ = _infer(e.scalar, env)
        if ts != Unit:
            raise CTypeError(f"scalar has type {ts}, expected I")
        tb, ub, ab = _infer(e.body, env)
        _disjoint(us, ub, e)
        return tb, us | ub, as_ or ab
    if isinstance(e, Let):
        ta, ua, aa = _infer(e.bound, env)
        tb, ub, ab = _infer(e.body, {**env, e.name: ta})
        ub = _bind(e.name, ub, ab)
        _disjoint(ua, ub, e)
        return tb, ua | ub, aa or ab
    if isinstance(e, Case):
        ts, us, as_ = _infer(e.scrut, env)
        if not isinstance(ts, Sum):
            raise CTypeError(f"case on non-sum type {ts}")
        t1, u1, ab1 = _infer(e.a1, {**env, e.x1: ts.left})
        t2, u2, ab2 = _infer(e.a2, {**env, e.x2: ts.right})
        if t1 != t2:
            raise CTypeError(f"case branches disagree: {t1} vs {t2}")
        u1, u2 = _bind(e.x1, u1, ab1), _bind(e.x2, u2, ab2)
        _share(u1, ab1, u2, ab2, e)
        ubr = u1 | u2
        _disjoint(us, ubr, e)
        return t1, us | ubr, as_ or (ab1 and ab2)
    if isinstance(e, Lam):
        tb, ub, ab = _infer(e.body, {**env, e.name: e.ty})
        return Arrow(e.ty, tb), _bind(e.name, ub, ab), ab
    if isinstance(e, App):
        tf, uf, af = _infer(e.fn, env)
        if not isinstance(tf, Arrow):
            raise CTypeError(f"applying a term of non-arrow type {tf}")
        ta, ua, aa = _infer(e.arg, env)
        if ta != tf.dom:
            raise CTypeError(f"argument of type {ta} where {tf.dom} expected")
        _disjoint(uf, ua, e)
        return tf.cod, uf | ua, af or aa
    raise CTypeError(f"not a C-expression: {e!r}")


def _bind(name, used, absorbs):
    if name not in used and not absorbs:
        raise CTypeError(f"linear variable {name} is never used")
    return used - {name}


def _disjoint(u1, u2, e):
    both = u1 & u2
    if both:
        raise CTypeError(f"linear variable(s) {', '.join(sorted(both))} used twice in {show(e)}")


def _share(u1, a1, u2, a2, e):
    if (u2 - u1) and not a1:
        raise CTypeError(f"{', '.join(sorted(u2 - u1))} unused on the left of {show(e)}")
    if (u1 - u2) and not a2:
        raise CTypeError(f"{', '.join(sorted(u1 - u2))} unused on the right of {show(e)}")


def typecheck(ctx, e):
    """Return the type of ``e`` under the linear context ``ctx`` (name -> type)."""
    ctx = dict(ctx or {})
    ty, used, absorbs = _infer(e, ctx)
    left = set(ctx) - used
    if left and not absorbs:
        raise CTypeError(f"linear variable(s) {', '.join(sorted(left))} never used")
    return ty


# -- substitution and evaluation ---------------------------------------------


def subst(e, x, v):
    """e{v/x}; v is closed or a fresh variable, so no capture can happen."""
    if isinstance(e, Var):
        return v if e.name == x else e
    if isinstance(e, (Const, Zero)):
        return e
    if isinstance(e, Add):
        return Add(subst(e.left, x, v), subst(e.right, x, v))
    if isinstance(e, Pair):
        return Pair(subst(e.left, x, v), subst(e.right, x, v))
    if isinstance(e, ScalarMul):
        return ScalarMul(subst(e.scalar, x, v), subst(e.body, x, v))
    if isinstance(e, App):
        return App(subst(e.fn, x, v), subst(e.arg, x, v))
    if isinstance(e, Let):
        body = e.body if e.name == x else subst(e.body, x, v)
        return Let(e.name, subst(e.bound, x, v), body)
    if isinstance(e, Lam):
        return e if e.name == x else Lam(e.name, e.ty, subst(e.body, x, v))
    if isinstance(e, Case):
        a1 = e.a1 if e.x1 == x else subst(e.a1, x, v)
        a2 = e.a2 if e.x2 == x else subst(e.a2, x, v)
        return Case(subst(e.scrut, x, v), e.x1, a1, e.x2, a2)
    raise TypeError(f"not a C-expression: {e!r}")


def subst_many(e, mapping):
    for x, v in mapping.items():
        e = subst(e, x, v)
    return e


def is_value(e) -> bool:
    if isinstance(e, (Const, Lam)):
        return True
    if isinstance(e, Pair):
        return is_value(e.left) and is_value(e.right)
    return False


@dataclass(frozen=True, slots=True)
class Done:
    value: object


def _zero_expand(ty):
    if isinstance(ty, UnitT):
        return Const(0)
    if isinstance(ty, Sum):
        return Pair(Zero(ty.left), Zero(ty.right))
    return Lam(fresh(), ty.dom, Zero(ty.cod))


def _scale(ring, r, v):
    if isinstance(v, Const):
        return Const(r * v.value % ring.d)
    if isinstance(v, Pair):
        return Pair(ScalarMul(Const(r), v.left), ScalarMul(Const(r), v.right))
    if isinstance(v, Lam):
        return Lam(v.name, v.ty, ScalarMul(Const(r), v.body))
    raise StuckError(f"cannot scale {show(v)}")


def _add(ring, a, b):
    if isinstance(a, Const) and isinstance(b, Const):
        return Const((a.value + b.value) % ring.d)
    if isinstance(a, Pair) and isinstance(b, Pair):
        return Pair(Add(a.left, b.left), Add(a.right, b.right))
    if isinstance(a, Lam) and isinstance(b, Lam):
        x = fresh(a.name)
        return Lam(x, a.ty, Add(subst(a.body, a.name, Var(x)), subst(b.body, b.name, Var(x))))
    raise StuckError(f"cannot add {show(a)} and {show(b)}")


def _step(e, ring):
    if isinstance(e, Let):
        if not is_value(e.bound):
            return Let(e.name, _step(e.bound, ring), e.body)
        return subst(e.body, e.name, e.bound)
    if isinstance(e, ScalarMul):
        if not is_value(e.scalar):
            return ScalarMul(_step(e.scalar, ring), e.body)
        if not is_value(e.body):
            return ScalarMul(e.scalar, _step(e.body, ring))
        if not isinstance(e.scalar, Const):
            raise StuckError(f"scalar is not a constant: {show(e.scalar)}")
        return _scale(ring, e.scalar.value, e.body)
    if isinstance(e, Add):
        if not is_value(e.left):
            return Add(_step(e.left, ring), e.right)
        if not is_value(e.right):
            return Add(e.left, _step(e.right, ring))
        return _add(ring, e.left, e.right)
    if isinstance(e, Pair):
        if not is_value(e.left):
            return Pair(_step(e.left, ring), e.right)
        return Pair(e.left, _step(e.right, ring))
    if isinstance(e, Case):
        if not is_value(e.scrut):
            return Case(_step(e.scrut, ring), e.x1, e.a1, e.x2, e.a2)
        s = e.scrut
        if not isinstance(s, Pair):
            raise StuckError(f"case on non-pair value {show(s)}")
        return Add(subst(e.a1, e.x1, s.left), subst(e.a2, e.x2, s.right))
    if isinstance(e, App):
        if not is_value(e.fn):
            return App(_step(e.fn, ring), e.arg)
        if not is_value(e.arg):
            return App(e.fn, _step(e.arg, ring))
        if not isinstance(e.fn, Lam):
            raise StuckError(f"applying non-lambda {show(e.fn)}")
        return subst(e.fn.body, e.fn.name, e.arg)
    if isinstance(e, Zero):
        return _zero_expand(e.ty)
    if isinstance(e, Const):
        # only reached for a constant outside [0, d)
        return Const(e.value % ring.d)
    raise StuckError(f"no rule applies to {show(e)}")


def step(e, ring: Ring):
    """One call-by-value step, or Done(value) when ``e`` is already a value."""
    if is_value(e) and not (isinstance(e, Const) and not 0 <= e.value < ring.d):
        return Done(e)
    return _step(e, ring)


DEFAULT_BUDGET = 10**6


def evaluate(e, ring: Ring, budget: int = DEFAULT_BUDGET, on_step=None):
    """Run to a value. ``on_step`` sees every intermediate term."""
    for _ in range(budget):
        if is_value(e):
            return normalize_value(e, ring)
        e = _step(e, ring)
        if on_step is not None:
            on_step(e)
    raise BudgetExceeded(f"no value after {budget} steps")


def normalize_value(v, ring):
    if isinstance(v, Const):
        return v if 0 <= v.value < ring.d else Const(v.value % ring.d)
    if isinstance(v, Pair):
        return Pair(normalize_value(v.left, ring), normalize_value(v.right, ring))
    return v


# -- first-order values -----------------------------------------------------


def flatten(v, ty=None) -> tuple:
    """In-order Unit leaves of a first-order value."""
    if isinstance(v, Const):
        return (v.value,)
    if isinstance(v, Pair):
        return flatten(v.left) + flatten(v.right)
    raise CTypeError(f"cannot flatten {show(v)}")


def unflatten(vec, ty, ring: Ring | None = None):
    vec = list(vec)
    if len(vec) != rank(ty):
        raise CTypeError(f"{len(vec)} coordinates for a type of rank {rank(ty)}")
    d = ring.d if ring else None

    def go(t, i):
        if isinstance(t, UnitT):
            r = vec[i] % d if d else vec[i]
            return Const(r), i + 1
        left, i = go(t.left, i)
        right, i = go(t.right, i)
        return Pair(left, right), i

    return go(ty, 0)[0]


def zero_value(ty):
    if isinstance(ty, UnitT):
        return Const(0)
    if isinstance(ty, Sum):
        return Pair(zero_value(ty.left), zero_value(ty.right))
    raise CTypeError(f"no first-order zero at {ty}")


def basis_values(ty) -> list:
    """The values lifting each standard basis vector of a first-order type."""
    if isinstance(ty, UnitT):
        return [Const(1)]
    if isinstance(ty, Sum):
        zl, zr = zero_value(ty.left), zero_value(ty.right)
        return [Pair(b, zr) for b in basis_values(ty.left)] + [Pair(zl, b) for b in basis_values(ty.right)]
    raise CTypeError(f"basis of higher-order type {ty} is not supported")


def equivalent(ctx, e1, e2, ty, ring: Ring) -> bool:
    """Decide ctx |- e1 == e2 : ty by substituting basis values.

    Terms denote multilinear maps in their context variables, so agreement
    on every tuple of basis values is agreement everywhere.
    """
    return counterexample(ctx, e1, e2, ty, ring) is None


def counterexample(ctx, e1, e2, ty, ring: Ring):
    """First basis substitution where the two sides differ, with both results."""
    ctx = dict(ctx or {})
    for t in list(ctx.values()) + [ty]:
        if not first_order(t):
            raise CTypeError(f"equivalence at higher-order type {t} is not supported")
    names = list(ctx)
    for combo in itertools.product(*(basis_values(ctx[n]) for n in names)):
        sigma = dict(zip(names, combo))
        r1 = flatten(evaluate(subst_many(e1, sigma), ring))
        r2 = flatten(evaluate(subst_many(e2, sigma), ring))
        if r1 != r2:
            return sigma, r1, r2
    return None


# -- the symplectic form as a term --------------------------------------------


def build_omega(sigma, ring: Ring):
    """Closed term of type sigma -o sigma -o I computing omega."""
    if not is_symplectic_type(sigma):
        raise CTypeError(f"{sigma} is not a symplectic type")
    x, y = fresh("w"), fresh("w")
    if sigma == PAULI_C:
        xx, xz, yx, yz = fresh("xx"), fresh("xz"), fresh("yx"), fresh("yz")
        minus = ScalarMul(Const(ring.d - 1), ScalarMul(Var(xx), Var(yz)))
        body = Case(
            Var(x),
            xx, Case(Var(y), yx, Zero(Unit), yz, minus),
            xz, Case(Var(y), yx, ScalarMul(Var(xz), Var(yx)), yz, Zero(Unit)),
        )
    else:
        w1, w2 = build_omega(sigma.left, ring), build_omega(sigma.right, ring)
        a1, a2, b1, b2 = fresh("a"), fresh("a"), fresh("b"), fresh("b")
        body = Case(
            Var(x),
            a1, Case(Var(y), b1, App(App(w1, Var(a1)), Var(b1)), b2, Zero(Unit)),
            a2, Case(Var(y), b1, Zero(Unit), b2, App(App(w2, Var(a2)), Var(b2))),
        )
    return Lam(x, sigma, Lam(y, sigma, body))


def omega_value(v1, v2, ring: Ring) -> int:
    from .phase_space import omega

    return omega(ring, flatten(v1), flatten(v2))
