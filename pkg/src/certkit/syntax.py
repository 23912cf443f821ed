"""Parse and serialize rules, ABoxes, queries, rewritings, and DL axioms.

File formats (statements end with '.', '#' starts a comment except on
directive lines, constants are lower-case bare names or single-quoted,
variables are ?name, predicates start with a letter):

  .rules  one rule per statement: `St(?x), Prof(?x) -> false.`;
          a rewriting file adds section markers #data / #bottom /
          #queryrules on their own lines
  .abox   ground atoms: `takesCo(c,d).`
  .q      mandatory first line `#query <Name>/<arity>.`, then rules whose
          heads use that predicate
  .dl     infix axioms: `exists takesCo. MathCo [= St.`, `trans(R).`,
          `R o S [= T.`, concepts built from and/or/exists/forall/self/
          inv/top/bottom/{a}

`=` and `!=` are sugar for the reserved predicates eq/2 and neq/2.
Constants with the reserved prefix `_f` are rejected unless allow_fresh is
passed (generated suites legitimately contain them).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

from .model import (
    ABox,
    Atom,
    Const,
    Disjunct,
    EQ,
    FRESH_PREFIX,
    NEQ,
    QPRIME,
    Rewriting,
    Rule,
    Term,
    UCQ,
    Var,
    abox,
    falsum_rule,
    is_plain,
    head_atom,
    plain_rule,
)


class SyntaxProblem(ValueError):
    """Raised for malformed input, with line/column context."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        if line:
            message = f"line {line}, col {col}: {message}"
        super().__init__(message)


# ======================================================================
# Tokenizer
# ======================================================================

_TOKEN_RE = re.compile(
    r"""
      (?P<WS>\s+)
    | (?P<VAR>\?[A-Za-z_][A-Za-z0-9_]*)
    | (?P<QUOTED>'(?:[^'\\]|\\.)*')
    | (?P<NAME>[A-Za-z_][A-Za-z0-9_]*)
    | (?P<SUBSUMED>\[=)
    | (?P<ARROW>->)
    | (?P<NEQOP>!=)
    | (?P<EQOP>=)
    | (?P<LPAREN>\()
    | (?P<RPAREN>\))
    | (?P<LBRACE>\{)
    | (?P<RBRACE>\})
    | (?P<COMMA>,)
    | (?P<DOT>\.)
    | (?P<PIPE>\|)
    | (?P<COLON>:)
    """,
    re.VERBOSE,
)

_BARE_CONST_RE = re.compile(r"[a-z_][A-Za-z0-9_]*\Z")
_PREDICATE_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")

_KEYWORDS = {
    "exists",
    "forall",
    "and",
    "or",
    "false",
    "top",
    "bottom",
    "inv",
    "self",
    "trans",
    "o",
}

_DIRECTIVES = ("#query", "#data", "#bottom", "#queryrules")


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    col: int


def _strip_comment(line: str) -> str:
    """Cut a line at the first '#' that is not inside single quotes."""
    in_quote = False
    i = 0
    while i < len(line):
        ch = line[i]
        if in_quote:
            if ch == "\\":
                i += 2
                continue
            if ch == "'":
                in_quote = False
        else:
            if ch == "'":
                in_quote = True
            elif ch == "#":
                return line[:i]
        i += 1
    return line


def _tokenize(text: str) -> List[_Token]:
    """Tokens plus DIRECTIVE tokens for #query/#data/#bottom/#queryrules lines."""
    tokens: List[_Token] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        matched_directive = None
        for d in sorted(_DIRECTIVES, key=len, reverse=True):
            if stripped == d or stripped.startswith(d + " "):
                matched_directive = d
                break
        if matched_directive is not None:
            tokens.append(_Token("DIRECTIVE", stripped, lineno, 1))
            continue
        line = _strip_comment(raw)
        pos = 0
        while pos < len(line):
            m = _TOKEN_RE.match(line, pos)
            if m is None:
                raise SyntaxProblem(
                    f"unexpected character {line[pos]!r}", lineno, pos + 1
                )
            kind = m.lastgroup or ""
            if kind != "WS":
                tokens.append(_Token(kind, m.group(), lineno, pos + 1))
            pos = m.end()
    return tokens


class _Stream:
    def __init__(self, tokens: Sequence[_Token]):
        self.tokens = list(tokens)
        self.i = 0

    def peek(self) -> Optional[_Token]:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self) -> _Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else _Token("", "", 0, 0)
            raise SyntaxProblem("unexpected end of input", last.line, last.col)
        self.i += 1
        return tok

    def expect(self, kind: str, what: str = "") -> _Token:
        tok = self.next()
        if tok.kind != kind:
            raise SyntaxProblem(
                f"expected {what or kind}, found {tok.text!r}", tok.line, tok.col
            )
        return tok

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        tok = self.peek()
        if tok is None or tok.kind != kind:
            return False
        return text is None or tok.text == text

    def take(self, kind: str, text: Optional[str] = None) -> bool:
        if self.at(kind, text):
            self.next()
            return True
        return False


def _unquote(text: str) -> str:
    body = text[1:-1]
    return body.replace("\\'", "'").replace("\\\\", "\\")


def _quote(name: str) -> str:
    escaped = name.replace("\\", "\\\\").replace("'", "\\'")
    return f"'{escaped}'"


# ======================================================================
# Term / atom / rule parsing
# ======================================================================


def _check_constant(name: str, tok: _Token, allow_fresh: bool) -> None:
    if name.startswith(FRESH_PREFIX) and not allow_fresh:
        raise SyntaxProblem(
            f"constant {name!r} uses the reserved fresh prefix {FRESH_PREFIX!r}",
            tok.line,
            tok.col,
        )


def _parse_term(s: _Stream, allow_fresh: bool) -> Term:
    tok = s.next()
    if tok.kind == "VAR":
        return Var(tok.text[1:])
    if tok.kind == "QUOTED":
        name = _unquote(tok.text)
        _check_constant(name, tok, allow_fresh)
        return Const(name)
    if tok.kind == "NAME":
        if tok.text in _KEYWORDS:
            raise SyntaxProblem(f"keyword {tok.text!r} cannot be a constant", tok.line, tok.col)
        if not _BARE_CONST_RE.match(tok.text):
            raise SyntaxProblem(
                f"bare constants must be lower-case ({tok.text!r}); quote it instead",
                tok.line,
                tok.col,
            )
        _check_constant(tok.text, tok, allow_fresh)
        return Const(tok.text)
    raise SyntaxProblem(f"expected a term, found {tok.text!r}", tok.line, tok.col)


def _parse_atom(s: _Stream, allow_fresh: bool, arities: Dict[str, int]) -> Atom:
    """One atom, or the =/!= sugar for eq/neq."""
    start = s.peek()
    if start is not None and start.kind == "NAME":
        nxt = s.tokens[s.i + 1] if s.i + 1 < len(s.tokens) else None
        if (
            start.text not in _KEYWORDS
            and nxt is not None
            and nxt.kind == "LPAREN"
        ):
            pred_tok = s.next()
            pred = pred_tok.text
            if not _PREDICATE_RE.match(pred):
                raise SyntaxProblem(f"bad predicate name {pred!r}", pred_tok.line, pred_tok.col)
            s.expect("LPAREN", "'('")
            args: List[Term] = []
            if not s.at("RPAREN"):
                args.append(_parse_term(s, allow_fresh))
                while s.take("COMMA"):
                    args.append(_parse_term(s, allow_fresh))
            s.expect("RPAREN", "')'")
            atom = Atom(pred, tuple(args))
            _check_atom(atom, pred_tok, arities)
            return atom
    # No predicate-parenthesis shape: must be the infix =/!= sugar.
    left = _parse_term(s, allow_fresh)
    op = s.next()
    if op.kind == "EQOP":
        pred = EQ
    elif op.kind == "NEQOP":
        pred = NEQ
    else:
        raise SyntaxProblem(
            f"expected '(' after a predicate or '='/'!=' after a term, found {op.text!r}",
            op.line,
            op.col,
        )
    right = _parse_term(s, allow_fresh)
    atom = Atom(pred, (left, right))
    _check_atom(atom, op, arities)
    return atom


def _check_atom(atom: Atom, tok: _Token, arities: Dict[str, int]) -> None:
    if atom.predicate in (EQ, NEQ) and atom.arity != 2:
        raise SyntaxProblem(
            f"{atom.predicate} is reserved with arity 2", tok.line, tok.col
        )
    if atom.predicate == "false":
        raise SyntaxProblem("'false' is the falsum head, not a predicate", tok.line, tok.col)
    seen = arities.get(atom.predicate)
    if seen is None:
        arities[atom.predicate] = atom.arity
    elif seen != atom.arity:
        raise SyntaxProblem(
            f"predicate {atom.predicate} used with arity {atom.arity} and {seen}",
            tok.line,
            tok.col,
        )


def _parse_atom_list(s: _Stream, allow_fresh: bool, arities: Dict[str, int]) -> List[Atom]:
    atoms = [_parse_atom(s, allow_fresh, arities)]
    while s.take("COMMA"):
        atoms.append(_parse_atom(s, allow_fresh, arities))
    return atoms


def _parse_disjunct(s: _Stream, allow_fresh: bool, arities: Dict[str, int]) -> Disjunct:
    exists: List[str] = []
    if s.at("NAME", "exists"):
        s.next()
        tok = s.expect("VAR", "an existential variable")
        exists.append(tok.text[1:])
        while s.take("COMMA"):
            tok = s.expect("VAR", "an existential variable")
            exists.append(tok.text[1:])
        s.expect("COLON", "':' after existential variables")
    atoms = _parse_atom_list(s, allow_fresh, arities)
    return Disjunct(frozenset(exists), tuple(atoms))


def _parse_rule(s: _Stream, allow_fresh: bool, arities: Dict[str, int]) -> Rule:
    first = s.peek()
    body = _parse_atom_list(s, allow_fresh, arities)
    s.expect("ARROW", "'->'")
    if s.at("NAME", "false"):
        s.next()
        s.expect("DOT", "'.'")
        return falsum_rule(body)
    disjuncts = [_parse_disjunct(s, allow_fresh, arities)]
    while s.take("PIPE"):
        disjuncts.append(_parse_disjunct(s, allow_fresh, arities))
    s.expect("DOT", "'.'")
    try:
        return Rule(tuple(body), tuple(disjuncts))
    except ValueError as exc:
        line, col = (first.line, first.col) if first else (0, 0)
        raise SyntaxProblem(str(exc), line, col)


# ======================================================================
# Public parsers
# ======================================================================


def parse_rules(text: str, allow_fresh: bool = False) -> Tuple[Rule, ...]:
    """All rules in the text; section markers, if present, are ignored."""
    tokens = [t for t in _tokenize(text) if t.kind != "DIRECTIVE"]
    s = _Stream(tokens)
    arities: Dict[str, int] = {}
    rules: List[Rule] = []
    while s.peek() is not None:
        rules.append(_parse_rule(s, allow_fresh, arities))
    return tuple(rules)


def parse_abox(text: str, allow_fresh: bool = False) -> ABox:
    tokens = _tokenize(text)
    for t in tokens:
        if t.kind == "DIRECTIVE":
            raise SyntaxProblem(f"unexpected directive {t.text!r} in ABox", t.line, t.col)
    s = _Stream(tokens)
    arities: Dict[str, int] = {}
    atoms: List[Atom] = []
    while s.peek() is not None:
        start = s.peek()
        atom = _parse_atom(s, allow_fresh, arities)
        s.expect("DOT", "'.'")
        if not atom.is_ground:
            assert start is not None
            raise SyntaxProblem("ABox atoms must be ground", start.line, start.col)
        atoms.append(atom)
    return abox(atoms)


_QUERY_DIRECTIVE_RE = re.compile(r"#query\s+([A-Za-z][A-Za-z0-9_]*)\s*/\s*(\d+)\s*\.?\s*\Z")


def parse_query(text: str, allow_fresh: bool = False) -> UCQ:
    tokens = _tokenize(text)
    if not tokens or tokens[0].kind != "DIRECTIVE" or not tokens[0].text.startswith("#query"):
        raise SyntaxProblem("query files must start with '#query <Name>/<arity>.'", 1, 1)
    m = _QUERY_DIRECTIVE_RE.match(tokens[0].text)
    if m is None:
        raise SyntaxProblem(
            f"malformed query directive {tokens[0].text!r}", tokens[0].line, 1
        )
    predicate, arity = m.group(1), int(m.group(2))
    rest = tokens[1:]
    for t in rest:
        if t.kind == "DIRECTIVE":
            raise SyntaxProblem(f"unexpected directive {t.text!r}", t.line, t.col)
    s = _Stream(rest)
    arities: Dict[str, int] = {predicate: arity}
    rules: List[Rule] = []
    while s.peek() is not None:
        start = s.peek()
        rule = _parse_rule(s, allow_fresh, arities)
        if not is_plain(rule):
            assert start is not None
            raise SyntaxProblem("query rules need plain single-atom heads", start.line, start.col)
        h = head_atom(rule)
        if h.predicate != predicate or h.arity != arity:
            assert start is not None
            raise SyntaxProblem(
                f"query rule head must be {predicate}/{arity}", start.line, start.col
            )
        rules.append(rule)
    return UCQ(predicate, arity, tuple(rules))


def parse_rewriting(text: str, allow_fresh: bool = False) -> Rewriting:
    """A sectioned rules file with #data / #bottom / #queryrules markers."""
    tokens = _tokenize(text)
    sections: Dict[str, List[_Token]] = {"#data": [], "#bottom": [], "#queryrules": []}
    current: Optional[str] = None
    for t in tokens:
        if t.kind == "DIRECTIVE":
            name = t.text.split()[0]
            if name == "#query":
                raise SyntaxProblem("#query belongs in .q files", t.line, t.col)
            if name not in sections:
                raise SyntaxProblem(f"unknown section {t.text!r}", t.line, t.col)
            current = name
            continue
        if current is None:
            raise SyntaxProblem(
                "rewriting files start with #data, #bottom, or #queryrules", t.line, t.col
            )
        sections[current].append(t)

    arities: Dict[str, int] = {}

    def rules_of(key: str) -> List[Rule]:
        s = _Stream(sections[key])
        out: List[Rule] = []
        while s.peek() is not None:
            out.append(_parse_rule(s, allow_fresh, arities))
        return out

    data = rules_of("#data")
    bottom = rules_of("#bottom")
    query_rules = rules_of("#queryrules")
    for r in bottom:
        if not r.is_falsum:
            raise SyntaxProblem("#bottom rules must end in false")
    predicates = {head_atom(r).predicate for r in query_rules if is_plain(r)}
    if len(predicates) > 1:
        raise SyntaxProblem(
            f"#queryrules heads use several predicates: {sorted(predicates)}"
        )
    if query_rules:
        if not all(is_plain(r) for r in query_rules):
            raise SyntaxProblem("#queryrules need plain single-atom heads")
        predicate = head_atom(query_rules[0]).predicate
        arity = head_atom(query_rules[0]).arity
        query = UCQ(predicate, arity, tuple(query_rules))
    else:
        query = UCQ("Q", 0, ())
    return Rewriting(tuple(data), tuple(bottom), query)


# ======================================================================
# Serialization
# ======================================================================


def serialize_term(t: Term) -> str:
    if t.is_var:
        return f"?{t.name}"
    if _BARE_CONST_RE.match(t.name) and t.name not in _KEYWORDS:
        return t.name
    return _quote(t.name)


def serialize_atom(a: Atom) -> str:
    args = ",".join(serialize_term(t) for t in a.args)
    return f"{a.predicate}({args})"


def _serialize_disjunct(d: Disjunct) -> str:
    atoms = ", ".join(serialize_atom(a) for a in d.atoms)
    if d.exists:
        evars = ", ".join(f"?{v}" for v in sorted(d.exists))
        return f"exists {evars} : {atoms}"
    return atoms


def serialize_rule(r: Rule) -> str:
    body = ", ".join(serialize_atom(a) for a in r.body)
    if r.is_falsum:
        return f"{body} -> false."
    head = " | ".join(_serialize_disjunct(d) for d in r.head)
    return f"{body} -> {head}."


def serialize_rules(rules: Iterable[Rule]) -> str:
    return "".join(serialize_rule(r) + "\n" for r in rules)


def serialize_abox(box: ABox) -> str:
    return "".join(serialize_atom(a) + ".\n" for a in box.sorted_atoms())


def serialize_query(q: UCQ) -> str:
    out = [f"#query {q.predicate}/{q.arity}."]
    out.extend(serialize_rule(r) for r in q.rules)
    return "\n".join(out) + "\n"


def serialize_rewriting(r: Rewriting) -> str:
    parts = ["#data\n"]
    parts.append(serialize_rules(r.data_rules))
    parts.append("#bottom\n")
    parts.append(serialize_rules(r.bottom_rules))
    parts.append("#queryrules\n")
    parts.append(serialize_rules(r.query.rules))
    return "".join(parts)


# ======================================================================
# DL axioms
# ======================================================================


@dataclass(frozen=True)
class AtomicConcept:
    name: str


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class And:
    parts: Tuple["Concept", ...]


@dataclass(frozen=True)
class Or:
    parts: Tuple["Concept", ...]


@dataclass(frozen=True)
class Exists:
    role: "RoleExpr"
    filler: "Concept"


@dataclass(frozen=True)
class Forall:
    role: "RoleExpr"
    filler: "Concept"


@dataclass(frozen=True)
class SelfRestriction:
    role: "RoleExpr"


@dataclass(frozen=True)
class Nominal:
    individual: str


Concept = Union[AtomicConcept, Top, Bottom, And, Or, Exists, Forall, SelfRestriction, Nominal]


@dataclass(frozen=True)
class RoleExpr:
    name: str
    inverse: bool = False


@dataclass(frozen=True)
class ConceptInclusion:
    left: Concept
    right: Concept


@dataclass(frozen=True)
class RoleInclusion:
    left: RoleExpr
    right: RoleExpr


@dataclass(frozen=True)
class RoleComposition:
    first: RoleExpr
    second: RoleExpr
    result: RoleExpr


@dataclass(frozen=True)
class Transitivity:
    role: RoleExpr


DLAxiom = Union[ConceptInclusion, RoleInclusion, RoleComposition, Transitivity]


@dataclass(frozen=True)
class TranslatedAxiom:
    """Rules produced from one source axiom, for per-axiom bookkeeping."""

    index: int
    axiom: DLAxiom
    rules: Tuple[Rule, ...]


# A bare name on either side of [= could denote a role or a concept; the
# parser collects both readings and a usage pass decides afterwards.


@dataclass(frozen=True)
class _BareSide:
    """A side of [= that is just a name or inv(name)."""

    name: str
    inverse: bool = False


def _parse_role(s: _Stream) -> RoleExpr:
    if s.at("NAME", "inv"):
        s.next()
        s.expect("LPAREN", "'('")
        tok = s.expect("NAME", "a role name")
        s.expect("RPAREN", "')'")
        return RoleExpr(tok.text, inverse=True)
    tok = s.expect("NAME", "a role name")
    if tok.text in _KEYWORDS:
        raise SyntaxProblem(f"keyword {tok.text!r} is not a role name", tok.line, tok.col)
    return RoleExpr(tok.text)


def _parse_concept_primary(s: _Stream) -> Union[Concept, _BareSide]:
    tok = s.peek()
    if tok is None:
        raise SyntaxProblem("unexpected end of axiom")
    if s.take("LPAREN"):
        inner = _parse_concept(s)
        s.expect("RPAREN", "')'")
        return inner
    if s.at("LBRACE"):
        s.next()
        name_tok = s.next()
        if name_tok.kind == "QUOTED":
            individual = _unquote(name_tok.text)
        elif name_tok.kind == "NAME" and _BARE_CONST_RE.match(name_tok.text):
            individual = name_tok.text
        else:
            raise SyntaxProblem(
                f"expected an individual in nominal, found {name_tok.text!r}",
                name_tok.line,
                name_tok.col,
            )
        s.expect("RBRACE", "'}'")
        return Nominal(individual)
    if s.at("NAME", "top"):
        s.next()
        return Top()
    if s.at("NAME", "bottom"):
        s.next()
        return Bottom()
    if s.at("NAME", "exists") or s.at("NAME", "forall"):
        ctor = Exists if s.next().text == "exists" else Forall
        role = _parse_role(s)
        s.expect("DOT", "'.' after the role")
        filler = _parse_concept_primary(s)
        if isinstance(filler, _BareSide):
            if filler.inverse:
                raise SyntaxProblem("a quantifier filler cannot be inv(...)")
            filler = AtomicConcept(filler.name)
        return ctor(role, filler)
    if s.at("NAME", "self"):
        s.next()
        s.expect("LPAREN", "'('")
        role = _parse_role(s)
        s.expect("RPAREN", "')'")
        return SelfRestriction(role)
    if s.at("NAME", "inv"):
        role = _parse_role(s)
        return _BareSide(role.name, inverse=True)
    if tok.kind == "NAME":
        if tok.text in _KEYWORDS:
            raise SyntaxProblem(f"unexpected keyword {tok.text!r}", tok.line, tok.col)
        s.next()
        return _BareSide(tok.text)
    raise SyntaxProblem(f"unexpected {tok.text!r} in concept", tok.line, tok.col)


def _as_concept(x: Union[Concept, _BareSide]) -> Concept:
    if isinstance(x, _BareSide):
        if x.inverse:
            raise SyntaxProblem(f"inv({x.name}) is a role, not a concept")
        return AtomicConcept(x.name)
    return x


def _parse_concept(s: _Stream) -> Concept:
    """Full concept with and/or; quantifiers bind tighter than and/or."""
    first = _parse_concept_primary(s)
    parts: List[Union[Concept, _BareSide]] = [first]
    ops: List[str] = []
    while s.at("NAME", "and") or s.at("NAME", "or"):
        ops.append(s.next().text)
        parts.append(_parse_concept_primary(s))
    if not ops:
        return _as_concept(first)
    if len(set(ops)) > 1:
        raise SyntaxProblem("mixing and/or needs parentheses")
    concepts = tuple(_as_concept(p) for p in parts)
    return And(concepts) if ops[0] == "and" else Or(concepts)


def _parse_inclusion_side(s: _Stream) -> Union[Concept, _BareSide]:
    first = _parse_concept_primary(s)
    if s.at("NAME", "and") or s.at("NAME", "or"):
        parts: List[Union[Concept, _BareSide]] = [first]
        ops: List[str] = []
        while s.at("NAME", "and") or s.at("NAME", "or"):
            ops.append(s.next().text)
            parts.append(_parse_concept_primary(s))
        if len(set(ops)) > 1:
            raise SyntaxProblem("mixing and/or needs parentheses")
        concepts = tuple(_as_concept(p) for p in parts)
        return And(concepts) if ops[0] == "and" else Or(concepts)
    return first


@dataclass(frozen=True)
class _PendingInclusion:
    """A [= statement whose sides may still be bare names."""

    left: Union[Concept, _BareSide]
    right: Union[Concept, _BareSide]
    line: int


def parse_dl(text: str) -> Tuple[DLAxiom, ...]:
    """DL axioms; bare `X [= Y` resolves to a role inclusion only when the
    names are used as roles elsewhere in the file."""
    tokens = _tokenize(text)
    for t in tokens:
        if t.kind == "DIRECTIVE":
            raise SyntaxProblem(f"unexpected directive {t.text!r}", t.line, t.col)
    s = _Stream(tokens)
    pending: List[Union[DLAxiom, _PendingInclusion]] = []
    while s.peek() is not None:
        tok = s.peek()
        assert tok is not None
        if s.at("NAME", "trans"):
            s.next()
            s.expect("LPAREN", "'('")
            role = _parse_role(s)
            s.expect("RPAREN", "')'")
            s.expect("DOT", "'.'")
            pending.append(Transitivity(role))
            continue
        left = _parse_inclusion_side(s)
        if s.at("NAME", "o"):
            s.next()
            if not isinstance(left, _BareSide):
                raise SyntaxProblem("role composition needs role names", tok.line, tok.col)
            first_role = RoleExpr(left.name, left.inverse)
            second = _parse_role(s)
            s.expect("SUBSUMED", "'[='")
            result = _parse_role(s)
            s.expect("DOT", "'.'")
            pending.append(RoleComposition(first_role, second, result))
            continue
        s.expect("SUBSUMED", "'[='")
        right = _parse_inclusion_side(s)
        s.expect("DOT", "'.'")
        pending.append(_PendingInclusion(left, right, tok.line))

    role_names: Set[str] = set()
    concept_names: Set[str] = set()

    def scan_concept(c: Concept) -> None:
        if isinstance(c, AtomicConcept):
            concept_names.add(c.name)
        elif isinstance(c, (And, Or)):
            for p in c.parts:
                scan_concept(p)
        elif isinstance(c, (Exists, Forall)):
            role_names.add(c.role.name)
            scan_concept(c.filler)
        elif isinstance(c, SelfRestriction):
            role_names.add(c.role.name)

    for item in pending:
        if isinstance(item, Transitivity):
            role_names.add(item.role.name)
        elif isinstance(item, RoleComposition):
            role_names.update((item.first.name, item.second.name, item.result.name))
        elif isinstance(item, _PendingInclusion):
            for side in (item.left, item.right):
                if isinstance(side, _BareSide):
                    if side.inverse:
                        role_names.add(side.name)
                else:
                    scan_concept(side)

    axioms: List[DLAxiom] = []
    for item in pending:
        if not isinstance(item, _PendingInclusion):
            axioms.append(item)
            continue
        left, right = item.left, item.right
        left_bare = isinstance(left, _BareSide)
        right_bare = isinstance(right, _BareSide)
        if left_bare and right_bare:
            l_role = left.inverse or left.name in role_names
            r_role = right.inverse or right.name in role_names
            l_concept = (not left.inverse) and left.name in concept_names
            r_concept = (not right.inverse) and right.name in concept_names
            if (l_role and l_concept) or (r_role and r_concept):
                clash = left.name if (l_role and l_concept) else right.name
                raise SyntaxProblem(
                    f"{clash!r} is used both as a role and as a concept", item.line
                )
            if l_role or r_role:
                if l_concept or r_concept:
                    raise SyntaxProblem(
                        "inclusion mixes a role with a concept", item.line
                    )
                axioms.append(
                    RoleInclusion(
                        RoleExpr(left.name, left.inverse),
                        RoleExpr(right.name, right.inverse),
                    )
                )
                continue
            axioms.append(ConceptInclusion(_as_concept(left), _as_concept(right)))
            continue
        axioms.append(ConceptInclusion(_as_concept(left), _as_concept(right)))
    return tuple(axioms)


# ======================================================================
# DL translation to rules
# ======================================================================


class _VarPool:
    """Hands out x, y, z, then x3, x4, ... deterministically."""

    def __init__(self) -> None:
        self.count = 0

    def fresh(self) -> str:
        names = ("x", "y", "z")
        name = names[self.count] if self.count < 3 else f"x{self.count}"
        self.count += 1
        return name


def _role_atom(role: RoleExpr, source: str, target: str) -> Atom:
    if role.inverse:
        return Atom(role.name, (Var(target), Var(source)))
    return Atom(role.name, (Var(source), Var(target)))


def _translate_body(c: Concept, var: str, pool: _VarPool) -> List[Atom]:
    """Atoms equivalent to membership of var in c, for left sides."""
    if isinstance(c, AtomicConcept):
        return [Atom(c.name, (Var(var),))]
    if isinstance(c, Top):
        return []
    if isinstance(c, And):
        out: List[Atom] = []
        for p in c.parts:
            out.extend(_translate_body(p, var, pool))
        return out
    if isinstance(c, Exists):
        fresh = pool.fresh()
        return [_role_atom(c.role, var, fresh)] + _translate_body(c.filler, fresh, pool)
    if isinstance(c, SelfRestriction):
        return [_role_atom(c.role, var, var)]
    if isinstance(c, Nominal):
        return [Atom(EQ, (Var(var), Const(c.individual)))]
    if isinstance(c, (Or, Forall)):
        kind = "or" if isinstance(c, Or) else "forall"
        raise SyntaxProblem(f"{kind} is not supported on the left of [=")
    if isinstance(c, Bottom):
        raise _VacuousAxiom()
    raise SyntaxProblem(f"unsupported left-side concept {c!r}")


class _VacuousAxiom(Exception):
    """Left side is bottom: the axiom holds trivially, emit no rules."""


class _TautologicalHead(Exception):
    """Right side contains a top-level top: the rule holds trivially."""


def _translate_disjunct(c: Concept, var: str, pool: _VarPool) -> Optional[Disjunct]:
    """One head disjunct for var in c; None when the disjunct is bottom."""
    exists: Set[str] = set()
    atoms: List[Atom] = []

    def walk(concept: Concept, v: str) -> bool:
        """Collect atoms; False means this conjunction is unsatisfiable."""
        if isinstance(concept, AtomicConcept):
            atoms.append(Atom(concept.name, (Var(v),)))
            return True
        if isinstance(concept, Top):
            return True
        if isinstance(concept, Bottom):
            return False
        if isinstance(concept, And):
            return all(walk(p, v) for p in concept.parts)
        if isinstance(concept, Exists):
            fresh = pool.fresh()
            exists.add(fresh)
            atoms.append(_role_atom(concept.role, v, fresh))
            return walk(concept.filler, fresh)
        if isinstance(concept, SelfRestriction):
            atoms.append(_role_atom(concept.role, v, v))
            return True
        if isinstance(concept, Nominal):
            atoms.append(Atom(EQ, (Var(v), Const(concept.individual))))
            return True
        if isinstance(concept, Forall):
            raise SyntaxProblem("forall nested under or/exists is not supported on the right")
        if isinstance(concept, Or):
            raise SyntaxProblem("or nested inside a disjunct needs parentheses at top level")
        raise SyntaxProblem(f"unsupported right-side concept {concept!r}")

    if not walk(c, var):
        return None
    if not atoms:
        # Pure top: the whole rule is trivially true.
        raise _TautologicalHead()
    return Disjunct(frozenset(exists), tuple(atoms))


def _translate_concept_inclusion(ax: ConceptInclusion) -> List[Rule]:
    # Split top-level conjunctions on the right into separate rules so a
    # nested forall can move its role atom into its own body copy.
    rights = list(ax.right.parts) if isinstance(ax.right, And) else [ax.right]
    rules: List[Rule] = []
    for right in rights:
        pool = _VarPool()
        root = pool.fresh()
        try:
            body = _translate_body(ax.left, root, pool)
        except _VacuousAxiom:
            return []
        rules.extend(_finish_inclusion(body, root, right, pool))
    return rules


def _finish_inclusion(
    body: List[Atom], head_var: str, right: Concept, pool: _VarPool
) -> List[Rule]:
    if isinstance(right, Forall):
        fresh = pool.fresh()
        new_body = body + [_role_atom(right.role, head_var, fresh)]
        return _finish_inclusion(new_body, fresh, right.filler, pool)
    if isinstance(right, And):
        out: List[Rule] = []
        for part in right.parts:
            out.extend(_finish_inclusion(list(body), head_var, part, pool))
        return out
    if not body:
        raise SyntaxProblem("a top-only left side gives an unsafe rule; not supported")
    if isinstance(right, Bottom):
        return [falsum_rule(body)]
    branches = list(right.parts) if isinstance(right, Or) else [right]
    disjuncts: List[Disjunct] = []
    try:
        for branch in branches:
            d = _translate_disjunct(branch, head_var, pool)
            if d is not None:
                disjuncts.append(d)
    except _TautologicalHead:
        return []
    if not disjuncts:
        return [falsum_rule(body)]
    return [Rule(tuple(body), tuple(disjuncts))]


def translate_axiom(ax: DLAxiom) -> List[Rule]:
    if isinstance(ax, ConceptInclusion):
        return _translate_concept_inclusion(ax)
    if isinstance(ax, RoleInclusion):
        body = [_role_atom(ax.left, "x", "y")]
        return [plain_rule(body, _role_atom(ax.right, "x", "y"))]
    if isinstance(ax, RoleComposition):
        body = [_role_atom(ax.first, "x", "y"), _role_atom(ax.second, "y", "z")]
        return [plain_rule(body, _role_atom(ax.result, "x", "z"))]
    if isinstance(ax, Transitivity):
        body = [_role_atom(ax.role, "x", "y"), _role_atom(ax.role, "y", "z")]
        return [plain_rule(body, _role_atom(ax.role, "x", "z"))]
    raise SyntaxProblem(f"unsupported axiom {ax!r}")


def translate_dl(axioms: Sequence[DLAxiom]) -> Tuple[TranslatedAxiom, ...]:
    """Rules for each axiom, keeping the axiom-to-rules association."""
    out: List[TranslatedAxiom] = []
    for i, ax in enumerate(axioms):
        try:
            rules = translate_axiom(ax)
        except SyntaxProblem as exc:
            raise SyntaxProblem(f"axiom {i}: {exc}")
        out.append(TranslatedAxiom(i, ax, tuple(rules)))
    return tuple(out)


def flatten_translation(groups: Sequence[TranslatedAxiom]) -> Tuple[Rule, ...]:
    out: List[Rule] = []
    for g in groups:
        out.extend(g.rules)
    return tuple(out)


# ======================================================================
# Equality axioms
# ======================================================================


def equality_axioms(signature: Iterable[Tuple[str, int]]) -> Tuple[Rule, ...]:
    """Rules for eq/neq semantics: clash, symmetry, transitivity, and one
    replacement rule per predicate argument position.

    Reflexivity is unsafe as a rule; the chase seeds eq(c,c) for every
    individual instead.
    """
    x, y, z = Var("x"), Var("y"), Var("z")
    rules: List[Rule] = [
        falsum_rule([Atom(NEQ, (x, y)), Atom(EQ, (x, y))]),
        plain_rule([Atom(EQ, (x, y))], Atom(EQ, (y, x))),
        plain_rule([Atom(EQ, (x, y)), Atom(EQ, (y, z))], Atom(EQ, (x, z))),
    ]
    for pred, arity in sorted(set(signature)):
        if pred in (EQ, NEQ):
            continue
        for i in range(arity):
            args = tuple(Var(f"x{j}") for j in range(arity))
            repl = tuple(Var("y") if j == i else a for j, a in enumerate(args))
            body = [Atom(pred, args), Atom(EQ, (Var(f"x{i}"), Var("y")))]
            rules.append(plain_rule(body, Atom(pred, repl)))
    return tuple(rules)
