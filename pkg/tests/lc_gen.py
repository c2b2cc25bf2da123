"""Random well-typed lambda^C terms.

``term(ctx, ty, depth)`` builds a term that uses every variable of ``ctx``
exactly once (up to the absorbing zero) and has AST depth at most ``depth``.
"""

import random

from pclif import lambda_c as lc

U = lc.Unit


def random_type(rng, rank_budget=3, arrows=True):
    roll = rng.random()
    if rank_budget <= 1 or roll < 0.35:
        return U
    if arrows and roll > 0.85:
        return lc.Arrow(random_type(rng, 2, False), random_type(rng, 2, False))
    k = rng.randint(1, rank_budget - 1)
    return lc.Sum(random_type(rng, k, arrows), random_type(rng, rank_budget - k, arrows))


def depth(e):
    kids = [getattr(e, f) for f in ("bound", "body", "scalar", "left", "right", "scrut", "a1", "a2", "fn", "arg")
            if hasattr(e, f) and not isinstance(getattr(e, f), str)]
    kids = [k for k in kids if isinstance(k, tuple(lc.__dict__[n] for n in _NODES))]
    return 1 + max((depth(k) for k in kids), default=0)


_NODES = ("Var", "Let", "Const", "ScalarMul", "Zero", "Add", "Pair", "Case", "Lam", "App")


class Gen:
    def __init__(self, rng: random.Random, d: int):
        self.rng, self.d = rng, d
        self.n = 0

    def fresh(self):
        self.n += 1
        return f"v{self.n}"

    def split(self, ctx):
        left, right = [], []
        for b in ctx:
            (left if self.rng.random() < 0.5 else right).append(b)
        return left, right

    def leaf(self, ctx, ty):
        if len(ctx) == 1 and ctx[0][1] == ty:
            return lc.Var(ctx[0][0])
        if not ctx and ty == U and self.rng.random() < 0.8:
            return lc.Const(self.rng.randrange(self.d))
        return lc.Zero(ty)

    def term(self, ctx, ty, depth):
        if depth <= 1:
            return self.leaf(ctx, ty)
        rng = self.rng
        if ctx and rng.random() < 0.6:
            return self.consume(ctx, ty, depth)
        options = ["add", "scale", "let"]
        if isinstance(ty, lc.Sum):
            options += ["pair", "pair"]
        if isinstance(ty, lc.Arrow):
            options += ["lam", "lam", "lam"]
        if depth >= 3:
            options += ["case", "app"]
        if not ctx:
            options += ["leaf"]
        pick = rng.choice(options)
        d1 = depth - 1
        if pick == "leaf":
            return self.leaf(ctx, ty)
        if pick == "add":
            return lc.Add(self.term(ctx, ty, d1), self.term(ctx, ty, d1))
        if pick == "pair":
            return lc.Pair(self.term(ctx, ty.left, d1), self.term(ctx, ty.right, d1))
        if pick == "lam":
            x = self.fresh()
            return lc.Lam(x, ty.dom, self.term(ctx + [(x, ty.dom)], ty.cod, d1))
        a, b = self.split(ctx)
        if pick == "scale":
            return lc.ScalarMul(self.term(a, U, d1), self.term(b, ty, d1))
        if pick == "let":
            s = random_type(rng, 2)
            x = self.fresh()
            return lc.Let(x, self.term(a, s, d1), self.term(b + [(x, s)], ty, d1))
        if pick == "case":
            s = lc.Sum(random_type(rng, 1), random_type(rng, 2, False))
            x1, x2 = self.fresh(), self.fresh()
            return lc.Case(self.term(a, s, d1), x1, self.term(b + [(x1, s.left)], ty, d1),
                           x2, self.term(b + [(x2, s.right)], ty, d1))
        s = random_type(rng, 2, False)
        return lc.App(self.term(a, lc.Arrow(s, ty), d1), self.term(b, s, d1))

    def consume(self, ctx, ty, depth):
        """Eliminate one variable of ``ctx`` on the way to ``ty``."""
        rng = self.rng
        i = rng.randrange(len(ctx))
        (x, s), rest = ctx[i], ctx[:i] + ctx[i + 1:]
        d1 = depth - 1
        if s == ty and not rest:
            return lc.Var(x)
        if isinstance(s, lc.UnitT):
            return lc.ScalarMul(lc.Var(x), self.term(rest, ty, d1))
        if isinstance(s, lc.Sum):
            x1, x2 = self.fresh(), self.fresh()
            return lc.Case(lc.Var(x), x1, self.term(rest + [(x1, s.left)], ty, d1),
                           x2, self.term(rest + [(x2, s.right)], ty, d1))
        if depth < 3:
            return self.leaf(ctx, ty)
        y = self.fresh()
        arg = self.term([], s.dom, depth - 2)
        return lc.Let(y, lc.App(lc.Var(x), arg), self.term(rest + [(y, s.cod)], ty, d1))


def closed_term(rng, d, max_depth=6):
    g = Gen(rng, d)
    ty = random_type(rng, 3)
    return g.term([], ty, rng.randint(1, max_depth)), ty


def linear_map(rng, d, max_depth=6):
    """A closed lambda of first-order type sigma -o tau."""
    g = Gen(rng, d)
    s, t = random_type(rng, 3, False), random_type(rng, 3, False)
    x = g.fresh()
    body = g.term([(x, s)], t, max_depth - 1)
    return lc.Lam(x, s, body), s, t
