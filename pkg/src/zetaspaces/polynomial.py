"""Sparse multivariate integer polynomials and a small recursive-descent parser.

Grammar (whitespace ignored)::

    expr   := ['+' | '-'] term (('+' | '-') term)*
    term   := power ('*' power)*
    power  := atom ('^' INTEGER)?
    atom   := INTEGER | VARIABLE | '(' expr ')'

Variables are ``x0 .. x{n-1}``; when ``n <= 3`` the aliases ``x, y, z`` stand
for ``x0, x1, x2``. ``^`` binds tighter than unary minus, so ``-x^2`` is
``-(x^2)``.
"""
from __future__ import annotations

import re
from typing import Mapping

from .errors import ArityError, ParseError

__all__ = ["Polynomial", "parse_polynomial"]

_ALIASES = {"x": 0, "y": 1, "z": 2}


class Polynomial:
    """Integer polynomial in ``nvars`` variables as a map ``exponents -> coefficient``."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], int] | None = None):
        self.nvars = nvars
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != nvars:
                raise ArityError(f"monomial {exps} does not have {nvars} exponents")
            if c:
                clean[exps] = clean.get(exps, 0) + int(c)
        self.terms = dict(sorted((e, c) for e, c in clean.items() if c))

    @classmethod
    def constant(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars, i):
        if not 0 <= i < nvars:
            raise ArityError(f"variable x{i} out of range for {nvars} variables")
        return cls(nvars, {tuple(1 if j == i else 0 for j in range(nvars)): 1})

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, tuple(self.terms.items())))

    def __repr__(self):
        return f"Polynomial({self.nvars}, {self.terms!r})"

    def __str__(self):
        return format_polynomial(self)

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Polynomial(self.nvars, out)

    def __neg__(self):
        return Polynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial(self.nvars, out)

    def __pow__(self, k: int):
        result = Polynomial.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_zero(self) -> bool:
        return not self.terms

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=0)

    def reduce_mod(self, p: int) -> Polynomial:
        return Polynomial(self.nvars, {e: c % p for e, c in self.terms.items()})

    def substitute(self, values: Mapping[int, int]) -> Polynomial:
        """Fix the variables in ``values`` to integers, keeping arity."""
        out: dict = {}
        for e, c in self.terms.items():
            coeff = c
            new_e = list(e)
            for i, v in values.items():
                if e[i]:
                    coeff *= v ** e[i]
                    new_e[i] = 0
            if coeff:
                key = tuple(new_e)
                out[key] = out.get(key, 0) + coeff
        return Polynomial(self.nvars, out)

    def drop_variables(self, keep: list[int]) -> Polynomial:
        """Re-index onto the variables in ``keep``; the others must not occur."""
        out = {}
        for e, c in self.terms.items():
            if any(e[i] for i in range(self.nvars) if i not in keep):
                raise ArityError("cannot drop a variable that occurs")
            out[tuple(e[i] for i in keep)] = c
        return Polynomial(len(keep), out)

    def evaluate(self, point, mod: int | None = None) -> int:
        total = 0
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term *= x**k
            total += term
        return total % mod if mod else total


def format_polynomial(poly: Polynomial, names: list[str] | None = None) -> str:
    if names is None:
        names = [f"x{i}" for i in range(poly.nvars)]
    if not poly.terms:
        return "0"
    pieces = []
    for e, c in sorted(poly.terms.items(), key=lambda t: (-sum(t[0]), t[0]), reverse=False):
        factors = []
        for name, k in zip(names, e):
            if k == 1:
                factors.append(name)
            elif k > 1:
                factors.append(f"{name}^{k}")
        mag = abs(c)
        if factors:
            body = "*".join(([str(mag)] if mag != 1 else []) + factors)
        else:
            body = str(mag)
        sign = "-" if c < 0 else "+"
        pieces.append((sign, body))
    first_sign, first_body = pieces[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def _tokenize(src: str):
    tokens = []
    pos = 0
    n = len(src)
    while pos < n:
        ch = src[pos]
        if ch.isspace():
            pos += 1
        elif ch.isdigit():
            end = pos
            while end < n and src[end].isdigit():
                end += 1
            tokens.append(("int", int(src[pos:end]), pos))
            pos = end
        elif ch.isalpha() or ch == "_":
            end = pos
            while end < n and (src[end].isalnum() or src[end] == "_"):
                end += 1
            tokens.append(("var", src[pos:end], pos))
            pos = end
        elif ch in "+-*^()":
            tokens.append((ch, ch, pos))
            pos += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", pos)
    tokens.append(("end", None, n))
    return tokens


class _Parser:
    def __init__(self, src, nvars):
        self.tokens = _tokenize(src)
        self.i = 0
        self.nvars = nvars

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        self.i += 1
        return tok

    def expr(self):
        sign = 1
        if self.peek()[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        result = self.term()
        if sign < 0:
            result = -result
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def term(self):
        result = self.power()
        while self.peek()[0] == "*":
            self.take()
            result = result * self.power()
        return result

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            exp = self.take("int")[1]
            base = base**exp
        return base

    def atom(self):
        kind, value, pos = self.peek()
        if kind == "int":
            self.take()
            return Polynomial.constant(self.nvars, value)
        if kind == "var":
            self.take()
            return Polynomial.variable(self.nvars, self.var_index(value, pos))
        if kind == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        raise ParseError(f"unexpected {value!r}" if value else "unexpected end of input", pos)

    def var_index(self, name, pos):
        if name in _ALIASES and self.nvars <= 3:
            idx = _ALIASES[name]
        else:
            m = re.fullmatch(r"x(\d+)", name)
            if not m:
                raise ParseError(f"unknown variable {name!r}", pos)
            idx = int(m.group(1))
        if idx >= self.nvars:
            raise ArityError(f"variable {name} out of range for {self.nvars} variables")
        return idx


def parse_polynomial(src: str, nvars: int) -> Polynomial:
    parser = _Parser(src, nvars)
    result = parser.expr()
    tok = parser.peek()
    if tok[0] != "end":
        raise ParseError(f"unexpected {tok[1]!r}", tok[2])
    return result
