"""Surface language for .pc files: lexer, parser, and elaboration.

A file is a ``dim d;`` header followed by definitions::

    hadamard :: |^ Pauli -o Pauli ^|
    hadamard |^ X = Z ^|
    hadamard |^ Z = X ^|

Clause patterns elaborate to nested case expressions, ``e1 ** e2`` to
``in1 e1 *.* in2 e2``, and ``X.i`` to the i-th injection into ``Pauli^n``.
Definitions with type variables or non-linear parameters are elaborated
afresh at each use site.
"""

from dataclasses import dataclass, field
import re

from .ring import Ring
from . import lambda_c as lc
from . import lambda_pc as lp
from . import pauli as pl


class ParseError(ValueError):
    def __init__(self, msg, line=None, col=None):
        self.msg, self.line, self.col = msg, line, col
        where = f"{line}:{col}: " if line is not None else ""
        super().__init__(where + msg)


# -- lexer --------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>--[^\n]*)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<sym>\|\^|\^\||::|->|-o(?![A-Za-z0-9_'])|\*\.\*|\*\*|[-+*=;()\[\]<>,.@^])
""", re.VERBOSE)

KEYWORDS = {"dim", "in1", "in2", "omega", "let", "in", "main"}


@dataclass(frozen=True)
class Token:
    kind: str  # int, ident, sym, eof
    text: str
    line: int
    col: int


def tokenize(src: str):
    out, pos, line, start = [], 0, 1, 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise ParseError(f"unexpected character {src[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            out.append(Token(kind, m.group(), line, m.start() - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


# -- surface syntax -------------------------------------------------------------


@dataclass(frozen=True)
class TVar:
    name: str


@dataclass(frozen=True)
class NLType:
    """|^ Q ^| (cod is None) or |^ Q -o Q' ^|."""

    dom: object
    cod: object = None

    @property
    def is_clifford(self):
        return self.cod is not None


@dataclass(frozen=True)
class Idx:
    """Index expression: an int, a variable, or variable + offset."""

    var: str | None
    offset: int

    def value(self, env, tok=None):
        if self.var is None:
            return self.offset
        if self.var not in env:
            raise ParseError(f"unknown index variable {self.var}", *(_at(tok)))
        return env[self.var] + self.offset


@dataclass(frozen=True)
class SName:
    name: str
    tok: Token
    index: Idx | None = None
    tyargs: tuple | None = None


@dataclass(frozen=True)
class SApp:
    head: object
    args: tuple


@dataclass(frozen=True)
class STensor:
    left: object
    right: object


@dataclass(frozen=True)
class SStar:
    left: object
    right: object


@dataclass(frozen=True)
class SPhase:
    cexpr: object
    body: object


@dataclass(frozen=True)
class SInj:
    side: int
    body: object
    tok: Token


@dataclass(frozen=True)
class SPow:
    body: object
    r: int
    tok: Token


@dataclass(frozen=True)
class SVec:
    entries: object  # nested lists of ints
    tok: Token


@dataclass(frozen=True)
class SLet:
    name: str
    bound: object
    body: object


# phase expressions
@dataclass(frozen=True)
class CInt:
    value: int


@dataclass(frozen=True)
class COmega:
    left: object
    right: object
    tok: Token


@dataclass(frozen=True)
class CBin:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class CNeg:
    body: object


@dataclass(frozen=True)
class PIn:
    side: int
    body: object


@dataclass(frozen=True)
class PAtom:
    name: str  # X, Z, or a variable
    index: Idx | None
    tok: Token


@dataclass
class Definition:
    name: str
    tok: Token
    params: list = field(default_factory=list)  # NLType per non-linear parameter
    result: NLType | None = None
    param_names: list | None = None
    clauses: list = field(default_factory=list)  # (pattern, body)
    body: object = None  # for lifted definitions


@dataclass
class Surface:
    dim: int | None
    defs: dict
    main: object = None


def _at(tok):
    return (tok.line, tok.col) if tok is not None else (None, None)


# -- parser -------------------------------------------------------------------


class Parser:
    def __init__(self, src):
        self.toks = tokenize(src)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def peek(self, k=1):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text):
        t = self.tok
        return t.kind in ("sym", "ident") and t.text == text

    def advance(self):
        t = self.tok
        self.i += 1
        return t

    def expect(self, text):
        if not self.at(text):
            self.fail(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def fail(self, msg, tok=None):
        t = tok or self.tok
        raise ParseError(msg, t.line, t.col)

    def ident(self):
        t = self.tok
        if t.kind != "ident" or t.text in KEYWORDS:
            self.fail(f"expected an identifier, found {t.text or 'end of input'!r}")
        return self.advance()

    def integer(self):
        neg = False
        if self.at("-"):
            self.advance()
            neg = True
        t = self.tok
        if t.kind != "int":
            self.fail(f"expected an integer, found {t.text or 'end of input'!r}")
        self.advance()
        return -int(t.text) if neg else int(t.text)

    # program
    def program(self) -> Surface:
        dim = None
        if self.at("dim"):
            self.advance()
            dim = self.integer()
            self.expect(";")
        defs, main = {}, None
        while self.tok.kind != "eof":
            if self.at(";"):
                self.advance()
                continue
            if self.at("main"):
                self.advance()
                self.expect("=")
                main = self.pexpr()
                if self.at(";"):
                    self.advance()
                continue
            name = self.ident()
            d = defs.setdefault(name.text, Definition(name.text, name))
            if self.at("::"):
                self.advance()
                if d.result is not None:
                    self.fail(f"{name.text} already has a signature", name)
                types = [self.nltype()]
                while self.at("->"):
                    self.advance()
                    types.append(self.nltype())
                d.params, d.result = types[:-1], types[-1]
            elif self.at("="):
                self.advance()
                self.expect("|^")
                if d.body is not None or d.clauses:
                    self.fail(f"{name.text} is defined twice", name)
                d.body = self.pexpr()
                self.expect("^|")
            else:
                params = []
                while self.tok.kind == "ident" and not self.at("|^"):
                    params.append(self.ident().text)
                if d.param_names is not None and d.param_names != params:
                    self.fail(f"clauses of {name.text} disagree on parameter names", name)
                d.param_names = params
                self.expect("|^")
                pat = self.pattern()
                self.expect("=")
                body = self.pexpr()
                self.expect("^|")
                d.clauses.append((pat, body))
            if self.at(";"):
                self.advance()
        return Surface(dim, defs, main)

    def nltype(self):
        self.expect("|^")
        dom = self.qtype()
        cod = None
        if self.at("-o"):
            self.advance()
            cod = self.qtype()
        self.expect("^|")
        return NLType(dom, cod)

    def qtype(self):
        left = self.qatom()
        if self.at("**"):
            self.advance()
            return lp.Prod(left, self.qtype())
        return left

    def qatom(self):
        if self.at("("):
            self.advance()
            q = self.qtype()
            self.expect(")")
            return q
        t = self.ident()
        base = lp.Pauli if t.text == "Pauli" else TVar(t.text)
        if self.at("^"):
            self.advance()
            n = self.integer()
            if n < 1:
                self.fail("Pauli^n needs n >= 1", t)
            if base != lp.Pauli:
                self.fail("only Pauli^n is supported", t)
            return lp.power(n)
        return base

    # patterns
    def pattern(self):
        if self.at("in1") or self.at("in2"):
            side = int(self.advance().text[-1])
            return PIn(side, self.pattern())
        if self.at("("):
            self.advance()
            p = self.pattern()
            self.expect(")")
            return p
        t = self.ident()
        return PAtom(t.text, self.index_suffix(), t)

    def index_suffix(self):
        if not self.at("."):
            return None
        self.advance()
        if self.tok.kind == "int":
            return Idx(None, int(self.advance().text))
        if self.at("("):
            self.advance()
            var = self.ident().text
            off = 0
            while self.at("+") or self.at("-"):
                sign = 1 if self.advance().text == "+" else -1
                off += sign * self.integer()
            self.expect(")")
            return Idx(var, off)
        return Idx(self.ident().text, 0)

    # expressions
    def pexpr(self):
        if self.at("let"):
            self.advance()
            x = self.ident().text
            self.expect("=")
            bound = self.pexpr()
            self.expect("in")
            return SLet(x, bound, self.pexpr())
        left = self.star()
        if self.at("**"):
            self.advance()
            return STensor(left, self.pexpr())
        return left

    def star(self):
        e = self.prefix()
        while self.at("*.*"):
            self.advance()
            e = SStar(e, self.prefix())
        return e

    def prefix(self):
        if self.at("<"):
            self.advance()
            c = self.cexpr()
            self.expect(">")
            return SPhase(c, self.prefix())
        if self.at("in1") or self.at("in2"):
            t = self.advance()
            return SInj(int(t.text[-1]), self.prefix(), t)
        return self.application()

    def application(self):
        head = self.postfix()
        args = []
        while self._starts_atom():
            args.append(self.postfix())
        return SApp(head, tuple(args)) if args else head

    def _starts_atom(self):
        t = self.tok
        if t.kind == "ident":
            return t.text not in KEYWORDS or t.text in ("in1", "in2")
        return t.kind == "sym" and t.text in ("(", "[")

    def postfix(self):
        if self.at("in1") or self.at("in2"):
            t = self.advance()
            return SInj(int(t.text[-1]), self.postfix(), t)
        e = self.atom()
        while self.at("^"):
            t = self.advance()
            e = SPow(e, self.integer(), t)
        return e

    def atom(self):
        t = self.tok
        if self.at("("):
            self.advance()
            e = self.pexpr()
            self.expect(")")
            return e
        if self.at("["):
            return SVec(self.vector(), t)
        name = self.ident()
        index = self.index_suffix()
        tyargs = None
        if self.at("@"):
            self.advance()
            self.expect("(")
            tyargs = [self.qtype()]
            while self.at(","):
                self.advance()
                tyargs.append(self.qtype())
            self.expect(")")
            tyargs = tuple(tyargs)
        return SName(name.text, name, index, tyargs)

    def vector(self):
        self.expect("[")
        items = [self.vitem()]
        while self.at(","):
            self.advance()
            items.append(self.vitem())
        self.expect("]")
        return items

    def vitem(self):
        return self.vector() if self.at("[") else self.integer()

    def cexpr(self):
        e = self.cterm()
        while self.at("+") or self.at("-"):
            op = self.advance().text
            e = CBin(op, e, self.cterm())
        return e

    def cterm(self):
        e = self.cfactor()
        while self.at("*"):
            self.advance()
            e = CBin("*", e, self.cfactor())
        return e

    def cfactor(self):
        if self.at("-"):
            self.advance()
            return CNeg(self.cfactor())
        if self.tok.kind == "int":
            return CInt(int(self.advance().text))
        if self.at("("):
            self.advance()
            e = self.cexpr()
            self.expect(")")
            return e
        if self.at("omega"):
            t = self.advance()
            return COmega(self.postfix(), self.postfix(), t)
        self.fail(f"expected a phase expression, found {self.tok.text or 'end of input'!r}")

    def finish(self):
        if self.tok.kind != "eof":
            self.fail(f"unexpected {self.tok.text!r}")


def parse_surface(src: str) -> Surface:
    p = Parser(src)
    s = p.program()
    p.finish()
    return s


def parse_expr_surface(src: str):
    p = Parser(src)
    e = p.pexpr()
    p.finish()
    return e


# -- elaboration ----------------------------------------------------------------

BUILTIN = ("I", "X", "Y", "Z")


class _NoInfer(Exception):
    """Raised when an expression needs an expected type."""


def _subst_ty(q, env):
    if isinstance(q, TVar):
        if q.name not in env:
            raise _NoInfer(f"type variable {q.name} is not determined")
        return env[q.name]
    if isinstance(q, lp.Prod):
        return lp.Prod(_subst_ty(q.left, env), _subst_ty(q.right, env))
    return q


def _match_ty(pat, q, env):
    if isinstance(pat, TVar):
        if pat.name in env:
            return env[pat.name] == q
        env[pat.name] = q
        return True
    if isinstance(pat, lp.Prod):
        return isinstance(q, lp.Prod) and _match_ty(pat.left, q.left, env) and _match_ty(pat.right, q.right, env)
    return pat == q


def _tyvars(q, out):
    if isinstance(q, TVar):
        if q.name not in out:
            out.append(q.name)
    elif isinstance(q, lp.Prod):
        _tyvars(q.left, out)
        _tyvars(q.right, out)
    return out


@dataclass
class Scope:
    linear: tuple | None = None  # (name, QType)
    nl: dict = field(default_factory=dict)  # parameter name -> Lifted | CliffordFn
    idx: dict = field(default_factory=dict)  # index variable -> int

    def with_linear(self, name, q):
        return Scope((name, q), self.nl, self.idx)

    def closed(self):
        return Scope(None, self.nl, self.idx)


class Program:
    """A parsed .pc file; definitions are elaborated on demand and cached."""

    def __init__(self, surface: Surface, ring: Ring):
        self.ring = ring
        self.surface = surface
        self.defs = surface.defs
        self._cache = {}
        self._active = set()
        for d in self.defs.values():
            if d.result is None and d.body is None:
                raise ParseError(f"{d.name} has clauses but no signature", *_at(d.tok))
            if d.result is not None and d.result.is_clifford and not d.clauses:
                raise ParseError(f"{d.name} has a signature but no clauses", *_at(d.tok))
            if d.clauses and len(d.param_names or []) != len(d.params):
                raise ParseError(f"{d.name} takes {len(d.params)} non-linear parameter(s), "
                                 f"clauses name {len(d.param_names or [])}", *_at(d.tok))

    # public API
    def names(self):
        return list(self.defs)

    def is_parametric(self, name) -> bool:
        d = self.defs[name]
        tv = []
        if d.result is not None:
            for t in d.params + [d.result]:
                _tyvars(t.dom, tv)
                if t.cod is not None:
                    _tyvars(t.cod, tv)
        return bool(d.params or tv)

    def clifford(self, text_or_name) -> lp.CliffordFn:
        """Resolve ``name``, ``name@(Q, ...)``, ``f^-1`` or ``f a b`` to a CliffordFn."""
        s = parse_expr_surface(text_or_name)
        return self.elab_fn(s, Scope())

    def expr(self, text, expected=None):
        """Elaborate a closed expression; returns (PExpr, QType)."""
        return self.elab(parse_expr_surface(text), expected, Scope())

    def main(self):
        if self.surface.main is None:
            return None
        return self.elab(self.surface.main, None, Scope())

    def lifted(self, name) -> lp.Lifted:
        key = (name, (), ())
        if key not in self._cache:
            d = self.defs[name]
            q = d.result.dom if d.result is not None else None
            if q is not None and (_tyvars(q, []) or d.params):
                raise ParseError(f"parametric lifted definition {name} is not supported", *_at(d.tok))
            self._enter(d)
            try:
                body, got = self.elab(d.body, q, Scope())
            finally:
                self._active.discard(d.name)
            self._cache[key] = lp.Lifted(name, got, body)
        return self._cache[key]

    # instantiation
    def _enter(self, d):
        if d.name in self._active:
            raise ParseError(f"definition {d.name} refers to itself", *_at(d.tok))
        self._active.add(d.name)

    def instantiate(self, name, tyenv, nlargs) -> lp.CliffordFn:
        d = self.defs[name]
        tv = []
        for t in d.params + [d.result]:
            _tyvars(t.dom, tv)
            if t.cod is not None:
                _tyvars(t.cod, tv)
        key = (name, tuple(tyenv.get(v) for v in tv), tuple(id(a) for a in nlargs))
        if key in self._cache:
            return self._cache[key][0]
        dom, cod = _subst_ty(d.result.dom, tyenv), _subst_ty(d.result.cod, tyenv)
        label = name
        if tv:
            label += "@(" + ", ".join(str(tyenv[v]) for v in tv) + ")"
        if nlargs:
            label += "(" + ", ".join(a.name for a in nlargs) + ")"
        scope = Scope(None, dict(zip(d.param_names or [], nlargs)), {})
        self._enter(d)
        try:
            var, body = self._clauses(d, dom, cod, scope)
        finally:
            self._active.discard(d.name)
        fn = lp.CliffordFn(label, var, dom, cod, body)
        # keep nlargs alive so their ids stay unique while cached
        self._cache[key] = (fn, nlargs)
        return fn

    # clauses -> case trees
    def _clauses(self, d, dom, cod, scope):
        items = [(pat, body, {}) for pat, body in d.clauses]
        top = self._single_var(items)
        var = top if top else "q"
        return var, self._build(d, dom, cod, items, var, scope)

    @staticmethod
    def _single_var(items):
        if len(items) == 1:
            pat = items[0][0]
            if isinstance(pat, PAtom) and pat.name not in ("X", "Z") and pat.index is None:
                return pat.name
        return None

    def _expand_index(self, pat, q, idx_env, d):
        """Rewrite X.i at type q into in1/in2 chains; yields (pattern, idx_env)."""
        if not isinstance(pat, PAtom) or pat.index is None:
            yield pat, idx_env
            return
        spine = _spine_len(q)
        ix = pat.index
        if ix.var is not None and ix.var not in idx_env:
            for i in range(1, spine + 1):
                env = {**idx_env, ix.var: i}
                if 1 <= ix.value(env) <= spine:
                    yield _chain(PAtom(pat.name, None, pat.tok), ix.value(env), q), env
            return
        k = ix.value(idx_env, pat.tok)
        if not 1 <= k <= spine:
            raise ParseError(f"index {k} out of range 1..{spine} for {q}", *_at(pat.tok))
        yield _chain(PAtom(pat.name, None, pat.tok), k, q), idx_env

    def _build(self, d, q, cod, items, var, scope):
        expanded = []
        for pat, body, env in items:
            for p2, env2 in self._expand_index(pat, q, env, d):
                expanded.append((p2, body, env2))
        items = expanded
        v = self._single_var(items)
        if v is not None:
            pat, body, env = items[0]
            if v != var:
                raise ParseError(f"internal: variable pattern {v} vs {var}", *_at(pat.tok))
            sc = Scope((v, q), scope.nl, env)
            e, _ = self.elab(body, cod, sc)
            return e
        for pat, _, _ in items:
            if isinstance(pat, PAtom) and pat.name not in ("X", "Z"):
                raise ParseError(f"variable pattern {pat.name} must be the only clause at its position",
                                 *_at(pat.tok))
        if isinstance(q, lp.PauliT):
            found = {}
            for pat, body, env in items:
                if not isinstance(pat, PAtom):
                    raise ParseError(f"{d.name}: injection pattern at Pauli position", *_at(_pat_tok(pat)))
                if pat.name in found:
                    raise ParseError(f"{d.name}: duplicate clause for {pat.name}", *_at(pat.tok))
                found[pat.name] = (body, env)
            missing = [n for n in ("X", "Z") if n not in found]
            if missing:
                raise ParseError(f"{d.name}: no clause for {' or '.join(missing)}", *_at(d.tok))
            ex = self.elab(found["X"][0], cod, Scope(None, scope.nl, found["X"][1]))[0]
            ez = self.elab(found["Z"][0], cod, Scope(None, scope.nl, found["Z"][1]))[0]
            return lp.CaseXZ(lp.PVar(var), ex, ez)
        sides = {1: [], 2: []}
        for pat, body, env in items:
            if not isinstance(pat, PIn):
                raise ParseError(f"{d.name}: pattern {pat.name} at product type {q}", *_at(pat.tok))
            sides[pat.side].append((pat.body, body, env))
        for s in (1, 2):
            if not sides[s]:
                raise ParseError(f"{d.name}: no clause for in{s} at {q}", *_at(d.tok))
        names = []
        for s in (1, 2):
            names.append(self._single_var(sides[s]) or lc.fresh(f"{var}{s}"))
        e1 = self._build(d, q.left, cod, sides[1], names[0], scope)
        e2 = self._build(d, q.right, cod, sides[2], names[1], scope)
        return lp.CaseProd(lp.PVar(var), names[0], e1, names[1], e2)

    # expressions
    def elab(self, s, expected, scope):
        """Elaborate ``s``; returns (PExpr, QType). Raises on a type clash."""
        try:
            return self._elab(s, expected, scope)
        except _NoInfer as err:
            raise lp.PTypeError(f"cannot infer a type here: {err}") from None

    def _elab(self, s, expected, scope):
        e, q = self._elab_raw(s, expected, scope)
        if expected is not None and q != expected:
            raise lp.PTypeError(f"expected {expected}, found {q}{_where(s)}")
        return e, q

    def _elab_raw(self, s, expected, scope):
        if isinstance(s, SName) and s.index is not None:
            if expected is None:
                raise _NoInfer(f"{s.name}.{_idx_text(s.index)} needs a known Pauli^n context")
            k = s.index.value(scope.idx, s.tok)
            return self._indexed(SName(s.name, s.tok, None, s.tyargs), k, expected, scope)
        if isinstance(s, SName):
            return self._name(s, expected, scope)
        if isinstance(s, SApp):
            return self._app(s, expected, scope)
        if isinstance(s, STensor):
            if isinstance(expected, lp.Prod):
                l, ql = self._elab(s.left, expected.left, scope)
                r, qr = self._elab(s.right, expected.right, scope)
            else:
                l, ql = self._elab(s.left, None, scope)
                r, qr = self._elab(s.right, None, scope)
            return lp.Star(lp.Inj(1, l, qr), lp.Inj(2, r, ql)), lp.Prod(ql, qr)
        if isinstance(s, SStar):
            if expected is None:
                try:
                    l, q = self._elab(s.left, None, scope)
                    r, _ = self._elab(s.right, q, scope)
                except _NoInfer:
                    r, q = self._elab(s.right, None, scope)
                    l, _ = self._elab(s.left, q, scope)
                return lp.Star(l, r), q
            l, _ = self._elab(s.left, expected, scope)
            r, _ = self._elab(s.right, expected, scope)
            return lp.Star(l, r), expected
        if isinstance(s, SPhase):
            e, q = self._elab(s.body, expected, scope)
            return lp.Phase(self._cexpr(s.cexpr, scope), e), q
        if isinstance(s, SInj):
            if not isinstance(expected, lp.Prod):
                raise _NoInfer(f"in{s.side} needs a known product type (line {s.tok.line})")
            part = expected.left if s.side == 1 else expected.right
            other = expected.right if s.side == 1 else expected.left
            e, _ = self._elab(s.body, part, scope)
            return lp.Inj(s.side, e, other), expected
        if isinstance(s, SPow):
            if self._is_fn(s.body, scope):
                raise lp.PTypeError(f"function power needs an argument{_where(s)}")
            e, q = self._elab(s.body, expected, scope)
            return lp.Pow(e, s.r % self.ring.d), q
        if isinstance(s, SVec):
            return self._vector(s, expected)
        if isinstance(s, SLet):
            b, qb = self._elab(s.bound, None, scope)
            e, q = self._elab(s.body, expected, scope.with_linear(s.name, qb))
            return lp.PLet(s.name, b, e), q
        raise ParseError(f"unsupported expression {s!r}")

    def _indexed(self, base, k, q, scope):
        spine = _spine_len(q)
        if not 1 <= k <= spine:
            raise ParseError(f"index {k} out of range 1..{spine} for {q}", *_at(base.tok))
        if k == 1 and not isinstance(q, lp.Prod):
            return self._elab(base, q, scope)
        if not isinstance(q, lp.Prod):
            raise ParseError(f"index {k} into {q}", *_at(base.tok))
        if k == 1:
            e, _ = self._elab(base, q.left, scope)
            return lp.Inj(1, e, q.right), q
        e, _ = self._indexed(base, k - 1, q.right, scope)
        return lp.Inj(2, e, q.left), q

    def _vector(self, s, expected):
        ring = self.ring

        def build(items):
            if isinstance(items, int):
                return lc.Const(items % ring.d)
            if len(items) != 2:
                raise ParseError("nested vectors must be pairs", *_at(s.tok))
            return lc.Pair(build(items[0]), build(items[1]))

        flat = all(isinstance(x, int) for x in s.entries)
        if flat and len(s.entries) > 2:
            if len(s.entries) % 2:
                raise ParseError("a flat vector needs an even number of entries", *_at(s.tok))
            q = expected if expected is not None else lp.power(len(s.entries) // 2)
            if lp.qrank(q) * 2 != len(s.entries):
                raise lp.PTypeError(f"vector of length {len(s.entries)} at type {q}")
            v = lc.unflatten(s.entries, lp.overline(q), ring)
        else:
            v = build(s.entries)
        try:
            q = lp.from_ctype(lc.typecheck({}, v))
        except lp.PTypeError:
            raise ParseError("vector literal is not Pauli-shaped", *_at(s.tok)) from None
        return lp.Embed(v), q

    def _name(self, s, expected, scope):
        n = s.name
        if scope.linear is not None and scope.linear[0] == n:
            return lp.PVar(n), scope.linear[1]
        if n in scope.nl:
            val = scope.nl[n]
            if isinstance(val, lp.Lifted):
                return lp.Force(val), val.qtype
            raise lp.PTypeError(f"{n} is a Clifford; apply it to an argument{_where(s)}")
        if n in self.defs:
            return self._app(SApp(s, ()), expected, scope)
        if n in BUILTIN:
            v = lc.unflatten(pl.NAMES[n], lc.PAULI_C, self.ring)
            return lp.Embed(v), lp.Pauli
        raise ParseError(f"unknown identifier {n}", *_at(s.tok))

    def _is_fn(self, s, scope):
        if isinstance(s, SPow):
            return self._is_fn(s.body, scope)
        head = s.head if isinstance(s, SApp) else s
        if not isinstance(head, SName):
            return False
        if head.name in scope.nl:
            return isinstance(scope.nl[head.name], lp.CliffordFn)
        d = self.defs.get(head.name)
        if d is None or d.result is None or not d.result.is_clifford:
            return False
        nargs = len(s.args) if isinstance(s, SApp) else 0
        return nargs <= len(d.params)

    def _app(self, s, expected, scope):
        head, args = s.head, list(s.args)
        if isinstance(head, SPow) or (isinstance(head, SName) and head.name in scope.nl):
            fn = self.elab_fn(head, scope)
            return self._apply_fn(fn, args, expected, scope, s)
        if not isinstance(head, SName):
            if not args:
                return self._elab(head, expected, scope)
            fn = self.elab_fn(head, scope)
            return self._apply_fn(fn, args, expected, scope, s)
        d = self.defs.get(head.name)
        if d is None:
            if head.name in BUILTIN and not args:
                return self._name(head, expected, scope)
            raise ParseError(f"unknown function {head.name}", *_at(head.tok))
        if d.result is None or not d.result.is_clifford:
            if args:
                raise lp.PTypeError(f"{head.name} is a Pauli, not a function{_where(head)}")
            lifted = self.lifted(head.name)
            return lp.Force(lifted), lifted.qtype
        k = len(d.params)
        if len(args) < k:
            raise lp.PTypeError(f"{head.name} needs {k} non-linear argument(s){_where(head)}")
        linear = args[k:]
        fn = self._instantiate_with(d, head, args[:k], linear, expected, scope)
        return self._apply_fn(fn, linear, expected, scope, s)

    def _apply_fn(self, fn, args, expected, scope, s):
        if len(args) != 1:
            raise lp.PTypeError(f"{fn.name} takes exactly one linear argument, got {len(args)}{_where(s)}")
        arg, _ = self._elab(args[0], fn.dom, scope)
        return lp.Apply(fn, arg), fn.cod

    def _instantiate_with(self, d, head, nl_args, linear, expected, scope):
        tyenv = {}
        tv = []
        for t in d.params + [d.result]:
            _tyvars(t.dom, tv)
            if t.cod is not None:
                _tyvars(t.cod, tv)
        if head.tyargs is not None:
            if len(head.tyargs) != len(tv):
                raise lp.PTypeError(f"{d.name} has {len(tv)} type parameter(s), given {len(head.tyargs)}")
            tyenv = dict(zip(tv, head.tyargs))
        values = []
        for ptype, arg in zip(d.params, nl_args):
            if ptype.is_clifford:
                fn = self.elab_fn(arg, scope.closed())
                if not (_match_ty(ptype.dom, fn.dom, tyenv) and _match_ty(ptype.cod, fn.cod, tyenv)):
                    raise lp.PTypeError(f"{d.name}: argument {fn.name} has type {fn.dom} -o {fn.cod}, "
                                        f"parameter wants {_show_ty(ptype.dom)} -o {_show_ty(ptype.cod)}")
                values.append(fn)
            else:
                try:
                    want = _subst_ty(ptype.dom, tyenv)
                except _NoInfer:
                    want = None
                e, q = self._elab(arg, want, scope.closed())
                if not _match_ty(ptype.dom, q, tyenv):
                    raise lp.PTypeError(f"{d.name}: Pauli argument of type {q} does not fit {_show_ty(ptype.dom)}")
                values.append(lp.Lifted(_arg_name(arg), q, e))
        missing = [v for v in tv if v not in tyenv]
        if missing and expected is not None:
            _match_ty(d.result.cod, expected, tyenv)
            missing = [v for v in tv if v not in tyenv]
        if missing and len(linear) == 1:
            _, q = self._elab(linear[0], None, scope)
            _match_ty(d.result.dom, q, tyenv)
            missing = [v for v in tv if v not in tyenv]
        if missing:
            raise lp.PTypeError(f"cannot determine type parameter(s) {', '.join(missing)} of {d.name}; "
                                f"write {d.name}@(...)")
        return self.instantiate(d.name, tyenv, values)

    def elab_fn(self, s, scope) -> lp.CliffordFn:
        """Elaborate an expression that must denote a Clifford (no linear argument)."""
        if isinstance(s, SPow):
            if s.r != -1:
                raise lp.PTypeError(f"only ^-1 is supported on Cliffords{_where(s)}")
            f = self.elab_fn(s.body, scope)
            fn = lp.CliffordFn(f"({f.name})^-1", "q", f.cod, f.dom, lp.ApplyInverse(f, lp.PVar("q")))
            return fn
        head, args = (s.head, list(s.args)) if isinstance(s, SApp) else (s, [])
        if not isinstance(head, SName):
            if not args:
                return self.elab_fn(head, scope)
            raise lp.PTypeError("expected a Clifford")
        if head.name in scope.nl:
            val = scope.nl[head.name]
            if not isinstance(val, lp.CliffordFn) or args:
                raise lp.PTypeError(f"{head.name} is not a Clifford here{_where(head)}")
            return val
        d = self.defs.get(head.name)
        if d is None:
            raise ParseError(f"unknown function {head.name}", *_at(head.tok))
        if d.result is None or not d.result.is_clifford:
            raise lp.PTypeError(f"{head.name} is not a Clifford{_where(head)}")
        if len(args) != len(d.params):
            raise lp.PTypeError(f"{head.name} needs {len(d.params)} non-linear argument(s), got {len(args)}")
        return self._instantiate_with(d, head, args, [], None, scope)

    def _cexpr(self, c, scope):
        ring = self.ring
        if isinstance(c, CInt):
            return lc.Const(c.value % ring.d)
        if isinstance(c, CNeg):
            return lc.ScalarMul(lc.Const(ring.d - 1), self._cexpr(c.body, scope))
        if isinstance(c, CBin):
            a, b = self._cexpr(c.left, scope), self._cexpr(c.right, scope)
            if c.op == "+":
                return lc.Add(a, b)
            if c.op == "-":
                return lc.Add(a, lc.ScalarMul(lc.Const(ring.d - 1), b))
            return lc.ScalarMul(a, b)
        if isinstance(c, COmega):
            try:
                a, q = self._elab(c.left, None, scope)
                b, _ = self._elab(c.right, q, scope)
            except _NoInfer:
                b, q = self._elab(c.right, None, scope)
                a, _ = self._elab(c.left, q, scope)
            om = lc.build_omega(lp.overline(q), ring)
            return lc.App(lc.App(om, lp.psi_of(a)), lp.psi_of(b))
        raise ParseError(f"bad phase expression {c!r}")

    # checking
    def check_all(self):
        """[(name, status, conditions, error)] for every definition."""
        out = []
        for name, d in self.defs.items():
            checker = lp.Checker(self.ring, name)
            try:
                if d.result is not None and d.result.is_clifford:
                    if self.is_parametric(name):
                        out.append((name, "parametric", [], None))
                        continue
                    fn = self.instantiate(name, {}, [])
                    fn.checked = False
                    checker.check_fn(fn)
                else:
                    lifted = self.lifted(name)
                    lifted.checked = False
                    checker.check_lifted(lifted)
                out.append((name, "ok", checker.conditions, None))
            except (lp.PTypeError, lc.CTypeError) as err:
                out.append((name, "error", checker.conditions, err))
        return out


def _spine_len(q):
    n = 1
    while isinstance(q, lp.Prod):
        n += 1
        q = q.right
    return n


def _chain(pat, k, q):
    if not isinstance(q, lp.Prod):
        return pat
    if k == 1:
        return PIn(1, pat)
    return PIn(2, _chain(pat, k - 1, q.right))


def _pat_tok(p):
    while isinstance(p, PIn):
        p = p.body
    return p.tok


def _idx_text(ix):
    if ix.var is None:
        return str(ix.offset)
    return f"({ix.var}{ix.offset:+d})" if ix.offset else ix.var


def _where(s):
    tok = getattr(s, "tok", None)
    return f" (line {tok.line}, column {tok.col})" if tok is not None else ""


def _show_ty(q):
    if isinstance(q, TVar):
        return q.name
    if isinstance(q, lp.Prod):
        return f"{_show_ty(q.left)} ** {_show_ty(q.right)}"
    return str(q)


def _arg_name(s):
    if isinstance(s, SName):
        return s.name if s.index is None else f"{s.name}.{_idx_text(s.index)}"
    return "<arg>"


def parse(src: str, d: int | None = None) -> Program:
    """Parse a .pc source. ``d`` is used when the file has no ``dim`` header."""
    surface = parse_surface(src)
    dim = surface.dim if surface.dim is not None else d
    if dim is None and not surface.defs and surface.main is None:
        dim = 2  # an empty file is an empty program
    if dim is None:
        raise ParseError("missing 'dim d;' header")
    if d is not None and surface.dim is not None and d != surface.dim:
        raise ParseError(f"file declares dim {surface.dim}, caller asked for {d}")
    if dim < 2:
        raise ParseError(f"dimension must be at least 2, got {dim}")
    return Program(surface, Ring(dim))


def load(path, d=None) -> Program:
    with open(path) as fh:
        return parse(fh.read(), d)
