# -*- coding: utf-8 -*-
"""
Workspaces: named algebras, morphisms, covers and derivations over a single
deformation, a small declarative text format for them, a JSON form, and the
command dispatcher used by the command-line front end.

Text form:

    theta [[0,1],[-1,0]];
    algebra F = free(x:(1,0));
    algebra T = free(x:(1,0), xs:(-1,0)) / { xs*x - 1 };
    algebra S = sphere(even, (1,0), (0,1));
    algebra U = localize(S, 1 - z);
    morphism f : F -> T = { x -> x };
    cover north_south on S = { 1 - z : 1/2, 1 + z : 1/2 };
    derivation E on F = { x -> x };
    hderivation V on F over F = { x -> x_2 };
    note "te-aut F F cap=2";
    xi-check F F --cap 2;

Statements other than the definitions above are commands; they are stored in
order and executed by run_workspace().
"""

import json
import re
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from braided_der import (
    BraidedDerivation, der_basis, der_bracket, derivation_from_dict, derivation_to_dict,
    validate_braided_derivation, verify_xi_iso,
)
from comodule_algebra import Element, FreeAlgebra, GeneratorSpec, render_monomial, specialize_q1
from errors import InvariantBreach, ParseError, UnknownCommand, ValidationError, DeformationMismatch
from mapping_aut import (
    HDerivation, hder_bracket, hderivation_from_dict, hderivation_to_dict, stage_product,
    tangent_lift, tangent_split, te_aut_basis, validate_hderivation, verify_inverse,
)
from morphisms import (
    AlgebraMorphism, compose, hom_constraints, morphism_from_dict, morphism_to_dict, validate_morphism,
)
from phase_ring import DeformationData, DegreeVector
from presentations import (
    AlgebraPresentation, coproduct, dual_numbers, even_sphere, ground_field, localize, nc_circle,
    nc_torus, odd_sphere, presentation_from_dict, presentation_to_dict, pushout,
    specialize_presentation, standard_monomials, validate_presentation, _with_companions,
)
from textform import ElementParser, Token, TokenStream, tokenize
from zariski import (
    ZariskiCover, cover_from_dict, cover_to_dict, glue, pullback_cover, validate_cover,
)

WORKSPACE_VERSION = 1
DEFAULT_CAP = 4

KINDS = ("algebras", "morphisms", "covers", "derivations", "hderivations")
KIND_LABELS = {
    "algebras": "algebra",
    "morphisms": "morphism",
    "covers": "cover",
    "derivations": "derivation",
    "hderivations": "hderivation",
}
PLAIN_ARG = re.compile(r"^(--)?[A-Za-z0-9_]+$|^-\d+$")


@contextmanager
def _named(name: str, tok: Optional[Token] = None):
    """Prefix validation errors raised inside the block with the object name."""
    try:
        yield
    except ValidationError as exc:
        located = getattr(exc, "located", False)
        if exc.name == name and (tok is None or located):
            raise
        detail = getattr(exc, "detail", str(exc)) if exc.name == name else str(exc)
        where = f" (line {tok.line})" if tok is not None else ""
        wrapped = type(exc)(f"{name}{where}: {detail}", index=exc.index, name=name, residue=exc.residue)
        wrapped.detail = detail
        wrapped.located = tok is not None
        raise wrapped from exc


# ============================================================================
# Workspace
# ============================================================================

@dataclass(frozen=True)
class Command:
    name: str
    args: Tuple[str, ...] = ()
    line: int = field(default=0, compare=False)

    def __str__(self) -> str:
        parts = [self.name] + [a if PLAIN_ARG.match(a) else f'"{a}"' for a in self.args]
        return " ".join(parts)


def _cover_key(c: ZariskiCover):
    return (c.base, c.elements, c.witnesses)


@dataclass(eq=False)
class Workspace:
    """Deformation data plus uniquely named objects, all validated on insertion."""

    deformation: Optional[DeformationData] = None
    algebras: Dict[str, AlgebraPresentation] = field(default_factory=dict)
    morphisms: Dict[str, AlgebraMorphism] = field(default_factory=dict)
    covers: Dict[str, ZariskiCover] = field(default_factory=dict)
    derivations: Dict[str, BraidedDerivation] = field(default_factory=dict)
    hderivations: Dict[str, HDerivation] = field(default_factory=dict)
    commands: List[Command] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Workspace):
            return NotImplemented
        return (
            self.deformation == other.deformation
            and self.algebras == other.algebras
            and self.morphisms == other.morphisms
            and {k: _cover_key(c) for k, c in self.covers.items()}
            == {k: _cover_key(c) for k, c in other.covers.items()}
            and self.derivations == other.derivations
            and self.hderivations == other.hderivations
            and self.commands == other.commands
            and self.notes == other.notes
        )

    def kind_of(self, name: str) -> Optional[str]:
        for kind in KINDS:
            if name in getattr(self, kind):
                return kind
        return None

    def require_deformation(self) -> DeformationData:
        if self.deformation is None:
            raise ValidationError("no deformation declared: start with 'theta [[...]];' or 'rank N;'")
        return self.deformation

    def set_deformation(self, d: DeformationData):
        if self.deformation is not None and self.deformation != d and self.algebras:
            raise DeformationMismatch("theta cannot change once algebras are defined")
        self.deformation = d

    def add(self, kind: str, name: str, obj):
        """Validate obj and store it under a fresh name."""
        existing = self.kind_of(name)
        if existing is not None:
            raise ValidationError(f"name {name!r} is already a {KIND_LABELS[existing]}", name=name)
        with _named(name):
            _VALIDATORS[kind](obj)
        obj.name = name
        getattr(self, kind)[name] = obj
        return obj

    def _get(self, kind: str, name: str):
        table = getattr(self, kind)
        if name not in table:
            raise ValidationError(f"unknown {KIND_LABELS[kind]} {name!r}", name=name)
        return table[name]

    def algebra(self, name: str) -> AlgebraPresentation:
        return self._get("algebras", name)

    def morphism(self, name: str) -> AlgebraMorphism:
        return self._get("morphisms", name)

    def cover(self, name: str) -> ZariskiCover:
        return self._get("covers", name)

    def derivation(self, name: str) -> BraidedDerivation:
        return self._get("derivations", name)

    def hderivation(self, name: str) -> HDerivation:
        return self._get("hderivations", name)

    def name_of(self, p: AlgebraPresentation) -> str:
        for name, q in self.algebras.items():
            if q is p:
                return name
        for name, q in self.algebras.items():
            if q == p:
                return name
        raise ValidationError(f"algebra {p.name or '?'} is not part of the workspace")

    def validate(self) -> bool:
        """Re-run every validator."""
        for kind in KINDS:
            for name, obj in getattr(self, kind).items():
                with _named(name):
                    _VALIDATORS[kind](obj)
        return True

    def summary(self) -> Dict[str, int]:
        return {kind: len(getattr(self, kind)) for kind in KINDS}


_VALIDATORS: Dict[str, Callable] = {
    "algebras": validate_presentation,
    "morphisms": validate_morphism,
    "covers": validate_cover,
    "derivations": validate_braided_derivation,
    "hderivations": validate_hderivation,
}


def _unit_inverse(p: AlgebraPresentation, a: Element) -> Optional[Element]:
    """Inverse of a unit times a monomial in invertible generators, else None."""
    a = p.reduce(a)
    if len(a) != 1:
        return None
    mono, c = a.items()[0]
    if not c.is_unit():
        return None
    alg = p.algebra
    out = alg.scalar(c.inverse())
    for i, k in enumerate(mono):
        if not k:
            continue
        g = alg.generators[i]
        inv = alg.index(g.inverse_of) if g.inverse_of else alg.companion_index(g.name)
        if inv is None:
            return None
        out = alg.gen(inv) ** k * out
    return p.reduce(out)


# ============================================================================
# Text form parser
# ============================================================================

class WorkspaceParser:
    """Recursive-descent parser over the shared token stream."""

    STATEMENTS = ("theta", "rank", "algebra", "morphism", "cover", "derivation", "hderivation", "note")

    def __init__(self, text: str, workspace: Optional[Workspace] = None):
        self.stream = TokenStream(tokenize(text))
        self.ws = workspace if workspace is not None else Workspace()

    # -- driver -------------------------------------------------------------------

    def parse(self) -> Workspace:
        while self.stream.peek().kind != "EOF":
            if self.stream.accept(";"):
                continue
            self.statement()
        return self.ws

    def statement(self):
        tok = self.stream.peek()
        if tok.kind != "NAME":
            raise self.stream.error(f"expected a statement, found {tok.value or tok.kind!r}")
        if tok.value in self.STATEMENTS and not self._glued_dash(tok, 1):
            self.stream.next()
            getattr(self, f"_stmt_{tok.value}")(tok)
        else:
            self.ws.commands.append(self.command())
        self._end_statement()

    def _end_statement(self):
        if self.stream.peek().kind == "EOF":
            return
        self.stream.expect(";")

    def _glued_dash(self, tok: Token, offset: int) -> bool:
        """True when a "-" follows tok with no space, as in cover-check."""
        nxt = self.stream.peek(offset)
        return nxt.kind == "OP" and nxt.value == "-" and nxt.line == tok.line and nxt.column == tok.column + len(tok.value)

    # -- small pieces -------------------------------------------------------------

    def name(self, what: str) -> Token:
        return self.stream.expect_kind("NAME", what)

    def ref(self, kind: str, what: str):
        """A previously defined object, looked up by name."""
        tok = self.name(what)
        try:
            return self.ws._get(kind, tok.value)
        except ValidationError as exc:
            raise type(exc)(f"{exc} (line {tok.line}, column {tok.column})", name=tok.value) from None

    def integer(self) -> int:
        negative = self.stream.accept("-")
        tok = self.stream.expect_kind("NUMBER", "an integer")
        return -int(tok.value) if negative else int(tok.value)

    def int_tuple(self) -> Tuple[int, ...]:
        self.stream.expect("(")
        values = [self.integer()]
        while self.stream.accept(","):
            values.append(self.integer())
        self.stream.expect(")")
        return tuple(values)

    def degree(self) -> DegreeVector:
        if self.stream.at("("):
            return self.int_tuple()
        return (self.integer(),)

    def element(self, algebra: FreeAlgebra) -> Element:
        return ElementParser(self.stream, algebra).parse_expr()

    def _deformation(self, tok: Token) -> DeformationData:
        try:
            return self.ws.require_deformation()
        except ValidationError as exc:
            raise type(exc)(f"{exc} (line {tok.line}, column {tok.column})") from None

    # -- statements ---------------------------------------------------------------

    def _stmt_theta(self, tok: Token):
        self.stream.expect("[")
        rows = []
        while True:
            self.stream.expect("[")
            row = [self.integer()]
            while self.stream.accept(","):
                row.append(self.integer())
            self.stream.expect("]")
            rows.append(row)
            if not self.stream.accept(","):
                break
        self.stream.expect("]")
        with _named("theta", tok):
            self.ws.set_deformation(DeformationData.from_matrix(rows))

    def _stmt_rank(self, tok: Token):
        n = self.integer()
        with _named("rank", tok):
            self.ws.set_deformation(DeformationData.commutative(n))

    def _stmt_note(self, tok: Token):
        self.ws.notes.append(self.stream.expect_kind("STRING", "a quoted note").value)

    def _stmt_algebra(self, tok: Token):
        name = self.name("an algebra name")
        self.stream.expect("=")
        form = self.name("an algebra form")
        builder = getattr(self, f"_form_{form.value}", None)
        if builder is None:
            raise self.stream.error(f"unknown algebra form {form.value!r}", form)
        with _named(name.value, name):
            p = builder(self._deformation(form))
            self.ws.add("algebras", name.value, p)

    def _stmt_morphism(self, tok: Token):
        name = self.name("a morphism name")
        self.stream.expect(":")
        source = self.ref("algebras", "a source algebra")
        self.stream.expect("->")
        target = self.ref("algebras", "a target algebra")
        self.stream.expect("=")
        given = self.assignments(source.algebra, target.algebra)
        with _named(name.value, name):
            images = []
            for g in source.generators:
                if g.name in given:
                    images.append(given[g.name])
                elif g.inverse_of and g.inverse_of in given:
                    inv = _unit_inverse(target, given[g.inverse_of])
                    if inv is None:
                        raise ValidationError(f"image of {g.inverse_of!r} is not a unit; give {g.name!r} explicitly")
                    images.append(inv)
                else:
                    raise ValidationError(f"no image for generator {g.name!r}")
            self.ws.add("morphisms", name.value, AlgebraMorphism(source, target, images))

    def _stmt_cover(self, tok: Token):
        name = self.name("a cover name")
        self.stream.expect("on")
        base = self.ref("algebras", "a base algebra")
        self.stream.expect("=")
        self.stream.expect("{")
        elements, witnesses = [], []
        while not self.stream.at("}"):
            elements.append(self.element(base.algebra))
            self.stream.expect(":")
            witnesses.append(self.element(base.algebra))
            if not self.stream.accept(","):
                break
        self.stream.expect("}")
        with _named(name.value, name):
            self.ws.add("covers", name.value, ZariskiCover(base, elements, witnesses))

    def _stmt_derivation(self, tok: Token):
        name = self.name("a derivation name")
        self.stream.expect("on")
        algebra = self.ref("algebras", "an algebra")
        self.stream.expect("=")
        given = self.assignments(algebra.algebra, algebra.algebra)
        coeffs = [given.get(g.name, algebra.algebra.zero()) for g in algebra.generators]
        with _named(name.value, name):
            self.ws.add("derivations", name.value, BraidedDerivation(algebra, coeffs))

    def _stmt_hderivation(self, tok: Token):
        name = self.name("a derivation name")
        self.stream.expect("on")
        space = self.ref("algebras", "an algebra")
        self.stream.expect("over")
        stage = self.ref("algebras", "a stage algebra")
        self.stream.expect("=")
        with _named(name.value, name):
            target = stage_product(space, stage).presentation
        given = self.assignments(space.algebra, target.algebra)
        images = [given.get(g.name, target.algebra.zero()) for g in space.generators]
        with _named(name.value, name):
            self.ws.add("hderivations", name.value, HDerivation(space, stage, images))

    def assignments(self, keys: FreeAlgebra, values: FreeAlgebra) -> Dict[str, Element]:
        """`{ gen -> elem, ... }` with gen a generator of keys, elem in values."""
        self.stream.expect("{")
        out: Dict[str, Element] = {}
        while not self.stream.at("}"):
            key = self.name("a generator name")
            if not keys.has_generator(key.value):
                raise self.stream.error(f"unknown generator {key.value!r}", key)
            if key.value in out:
                raise self.stream.error(f"generator {key.value!r} assigned twice", key)
            self.stream.expect("->")
            out[key.value] = self.element(values)
            if not self.stream.accept(","):
                break
        self.stream.expect("}")
        return out

    # -- algebra forms ------------------------------------------------------------

    def _form_free(self, d: DeformationData) -> AlgebraPresentation:
        self.stream.expect("(")
        specs: List[GeneratorSpec] = []
        while not self.stream.at(")"):
            tok = self.name("a generator name")
            if tok.value == "q":
                raise self.stream.error("'q' is reserved for the deformation parameter", tok)
            if any(s.name == tok.value for s in specs):
                raise self.stream.error(f"generator {tok.value!r} declared twice", tok)
            self.stream.expect(":")
            m = self.degree()
            invertible = False
            if self.stream.accept("^"):
                self.stream.expect("-")
                one = self.stream.expect_kind("NUMBER", "1")
                if one.value != "1":
                    raise self.stream.error("only ^-1 marks an invertible generator", one)
                invertible = True
            specs.append(GeneratorSpec(tok.value, d.check_degree(m), invertible))
            if not self.stream.accept(","):
                break
        self.stream.expect(")")
        relations: List[Element] = []
        if self.stream.accept("/"):
            algebra = FreeAlgebra(d, _with_companions(specs))
            self.stream.expect("{")
            while not self.stream.at("}"):
                relations.append(self.element(algebra))
                if not self.stream.accept(","):
                    break
            self.stream.expect("}")
        return AlgebraPresentation(d, specs, relations)

    def _form_coproduct(self, d: DeformationData) -> AlgebraPresentation:
        self.stream.expect("(")
        a = self.ref("algebras", "an algebra")
        self.stream.expect(",")
        b = self.ref("algebras", "an algebra")
        self.stream.expect(")")
        return coproduct(a, b)[0]

    def _form_localize(self, d: DeformationData) -> AlgebraPresentation:
        self.stream.expect("(")
        a = self.ref("algebras", "an algebra")
        self.stream.expect(",")
        s = self.element(a.algebra)
        var = "y"
        if self.stream.accept(","):
            var = self.name("a generator name").value
        self.stream.expect(")")
        return localize(a, s, var)[0]

    def _form_pushout(self, d: DeformationData) -> AlgebraPresentation:
        self.stream.expect("(")
        c = self.ref("algebras", "an algebra")
        self.stream.expect(",")
        kappa = self.ref("morphisms", "a morphism")
        self.stream.expect(",")
        zeta = self.ref("morphisms", "a morphism")
        self.stream.expect(")")
        return pushout(c, kappa.target, zeta.target, kappa, zeta)[0]

    def _family(self, words: Sequence[str]) -> Tuple[Optional[str], List[DegreeVector]]:
        """`([N,] [word,] (m..), ...)`; N, when given, must count the degrees."""
        self.stream.expect("(")
        count = None
        if self.stream.peek().kind == "NUMBER":
            count = self.integer()
            self.stream.expect(",")
        word = None
        if words:
            tok = self.name(" or ".join(words))
            if tok.value not in words:
                raise self.stream.error(f"expected {' or '.join(words)}, found {tok.value!r}", tok)
            word = tok.value
            self.stream.expect(",")
        degrees = [self.degree()]
        while self.stream.accept(","):
            degrees.append(self.degree())
        close = self.stream.expect(")")
        if count is not None and count != len(degrees):
            raise ParseError(f"expected {count} degree vectors, found {len(degrees)}", close.line, close.column)
        return word, degrees

    def _form_torus(self, d: DeformationData) -> AlgebraPresentation:
        _, degrees = self._family(())
        return nc_torus(d, degrees)

    def _form_sphere(self, d: DeformationData) -> AlgebraPresentation:
        parity, degrees = self._family(("even", "odd"))
        return even_sphere(d, degrees) if parity == "even" else odd_sphere(d, degrees)

    def _form_circle(self, d: DeformationData) -> AlgebraPresentation:
        self.stream.expect("(")
        m = self.degree()
        var = "y"
        if self.stream.accept(","):
            var = self.name("a generator name").value
        self.stream.expect(")")
        return nc_circle(d, m, var)

    def _form_field(self, d: DeformationData) -> AlgebraPresentation:
        self.stream.expect("(")
        self.stream.expect(")")
        return ground_field(d)

    def _form_dual(self, d: DeformationData) -> AlgebraPresentation:
        self.stream.expect("(")
        self.stream.expect(")")
        return dual_numbers(d)

    # -- commands -----------------------------------------------------------------

    def command(self) -> Command:
        first = self.name("a command")
        name = first.value
        last = first
        while self._glued_dash(last, 0) and self.stream.peek(1).kind == "NAME":
            self.stream.next()
            last = self.stream.next()
            name += "-" + last.value
        args: List[str] = []
        while not self.stream.at(";") and self.stream.peek().kind != "EOF":
            tok = self.stream.next()
            if tok.kind in ("NAME", "NUMBER", "STRING", "OPTION"):
                args.append(tok.value)
            elif tok.value == "-" and self.stream.peek().kind == "NUMBER":
                args.append("-" + self.stream.next().value)
            elif tok.value == "(":
                parts = ["("]
                while not self.stream.at(")"):
                    inner = self.stream.next()
                    if inner.kind == "EOF":
                        raise self.stream.error("unterminated '('", tok)
                    parts.append(inner.value)
                parts.append(self.stream.next().value)
                args.append("".join(parts))
            else:
                raise self.stream.error(f"unexpected {tok.value!r} in command arguments", tok)
        return Command(name, tuple(args), first.line)


def parse_workspace(text: str, workspace: Optional[Workspace] = None) -> Workspace:
    """Parse the text form into a validated Workspace."""
    return WorkspaceParser(text, workspace).parse()


def parse_command(text: str) -> Command:
    parser = WorkspaceParser(text)
    command = parser.command()
    parser._end_statement()
    tok = parser.stream.peek()
    if tok.kind != "EOF":
        raise parser.stream.error(f"unexpected {tok.value!r} after command", tok)
    return command


# ============================================================================
# Serialization
# ============================================================================

def _render_degree(m: DegreeVector) -> str:
    return "(" + ",".join(str(x) for x in m) + ")"


def _render_images(keys: AlgebraPresentation, images: Sequence[Element]) -> str:
    pairs = [f"{g.name} -> {img}" for g, img in zip(keys.generators, images) if not img.is_zero()]
    return "{ " + ", ".join(pairs) + " }" if pairs else "{ }"


def _render_algebra(p: AlgebraPresentation) -> str:
    gens = []
    for g in p.generators:
        if g.inverse_of:
            continue
        gens.append(f"{g.name}:{_render_degree(g.degree)}" + ("^-1" if g.invertible else ""))
    text = f"free({', '.join(gens)})"
    rels = [str(r) for k, r in enumerate(p.relations) if not p.is_automatic_relation(k)]
    if rels:
        text += " / { " + ", ".join(rels) + " }"
    return text


def serialize_workspace(ws: Workspace) -> str:
    """Text form of ws; every algebra is written as an explicit presentation."""
    lines = []
    if ws.deformation is not None:
        rows = ",".join("[" + ",".join(str(x) for x in row) + "]" for row in ws.deformation.theta)
        lines.append(f"theta [{rows}];")
    for name, p in ws.algebras.items():
        lines.append(f"algebra {name} = {_render_algebra(p)};")
    for name, m in ws.morphisms.items():
        src, tgt = ws.name_of(m.source), ws.name_of(m.target)
        pairs = ", ".join(f"{g.name} -> {img}" for g, img in zip(m.source.generators, m.images))
        lines.append(f"morphism {name} : {src} -> {tgt} = {{ {pairs} }};")
    for name, c in ws.covers.items():
        pairs = ", ".join(f"{s} : {a}" for s, a in zip(c.elements, c.witnesses))
        lines.append(f"cover {name} on {ws.name_of(c.base)} = {{ {pairs} }};")
    for name, L in ws.derivations.items():
        lines.append(f"derivation {name} on {ws.name_of(L.algebra)} = {_render_images(L.algebra, L.coeffs)};")
    for name, v in ws.hderivations.items():
        head = f"hderivation {name} on {ws.name_of(v.space)} over {ws.name_of(v.stage)}"
        lines.append(f"{head} = {_render_images(v.space, v.images)};")
    for note in ws.notes:
        lines.append(f'note "{note}";')
    for command in ws.commands:
        lines.append(f"{command};")
    return "\n".join(lines) + "\n"


def workspace_to_dict(ws: Workspace) -> Dict:
    names = {kind: {} for kind in KINDS}
    for name, p in ws.algebras.items():
        names["algebras"][name] = presentation_to_dict(p)
    for name, m in ws.morphisms.items():
        names["morphisms"][name] = morphism_to_dict(m, ws.name_of(m.source), ws.name_of(m.target))
    for name, c in ws.covers.items():
        names["covers"][name] = cover_to_dict(c, ws.name_of(c.base))
    for name, L in ws.derivations.items():
        names["derivations"][name] = derivation_to_dict(L, ws.name_of(L.algebra))
    for name, v in ws.hderivations.items():
        names["hderivations"][name] = hderivation_to_dict(v, ws.name_of(v.space), ws.name_of(v.stage))
    doc = {
        "version": WORKSPACE_VERSION,
        "theta": [list(row) for row in ws.deformation.theta] if ws.deformation else None,
        "commands": [[c.name, *c.args] for c in ws.commands],
        "notes": list(ws.notes),
    }
    doc.update(names)
    return doc


_READERS = {
    "morphisms": morphism_from_dict,
    "covers": cover_from_dict,
    "derivations": derivation_from_dict,
    "hderivations": hderivation_from_dict,
}


def workspace_from_dict(doc: Dict) -> Workspace:
    version = doc.get("version")
    if version != WORKSPACE_VERSION:
        raise ValidationError(f"unsupported workspace document version {version!r}")
    ws = Workspace()
    if doc.get("theta") is not None:
        ws.set_deformation(DeformationData.from_matrix(doc["theta"]))
    for name, sub in doc.get("algebras", {}).items():
        with _named(name):
            p = presentation_from_dict(sub)
            if p.deformation != ws.require_deformation():
                raise DeformationMismatch("algebra deformation differs from the workspace theta")
            ws.add("algebras", name, p)
    for kind in ("morphisms", "covers", "derivations", "hderivations"):
        for name, sub in doc.get(kind, {}).items():
            with _named(name):
                ws.add(kind, name, _READERS[kind](sub, ws.algebras))
    ws.commands = [Command(entry[0], tuple(str(a) for a in entry[1:])) for entry in doc.get("commands", [])]
    ws.notes = [str(n) for n in doc.get("notes", [])]
    return ws


def load_workspace(text: str) -> Workspace:
    """Either document form: JSON when the text starts with '{'."""
    if text.lstrip().startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
        return workspace_from_dict(doc)
    return parse_workspace(text)


def dump_workspace(ws: Workspace, as_json: bool = False) -> str:
    if as_json:
        return json.dumps(workspace_to_dict(ws), indent=2, sort_keys=True) + "\n"
    return serialize_workspace(ws)


def specialize_workspace(ws: Workspace) -> Workspace:
    """Copy of ws with q -> 1 applied everywhere."""
    d = ws.deformation.specialize_q1() if ws.deformation else None
    out = Workspace(deformation=d, commands=list(ws.commands), notes=list(ws.notes))
    moved: Dict[str, AlgebraPresentation] = {}
    for name, p in ws.algebras.items():
        moved[name] = specialize_presentation(p)
        out.add("algebras", name, moved[name])

    def alg(p: AlgebraPresentation) -> AlgebraPresentation:
        return moved[ws.name_of(p)]

    for name, m in ws.morphisms.items():
        tgt = alg(m.target)
        out.add("morphisms", name, AlgebraMorphism(alg(m.source), tgt, [specialize_q1(i, tgt.algebra) for i in m.images]))
    for name, c in ws.covers.items():
        base = alg(c.base)
        out.add("covers", name, ZariskiCover(
            base,
            [specialize_q1(s, base.algebra) for s in c.elements],
            [specialize_q1(a, base.algebra) for a in c.witnesses],
        ))
    for name, L in ws.derivations.items():
        a = alg(L.algebra)
        out.add("derivations", name, BraidedDerivation(a, [specialize_q1(x, a.algebra) for x in L.coeffs], L.cap))
    for name, v in ws.hderivations.items():
        space, stage = alg(v.space), alg(v.stage)
        target = stage_product(space, stage).presentation.algebra
        out.add("hderivations", name, HDerivation(space, stage, [specialize_q1(x, target) for x in v.images], v.cap))
    return out


# ============================================================================
# Commands
# ============================================================================

@dataclass
class CommandResult:
    command: str
    cap: Optional[int]
    data: Dict
    lines: List[str]
    ok: bool = True

    def to_json(self) -> str:
        doc = {"command": self.command, "cap": self.cap, "ok": self.ok}
        doc.update(self.data)
        return json.dumps(doc, indent=2, sort_keys=True)

    def to_text(self) -> str:
        return "\n".join(self.lines)


@dataclass
class CommandOptions:
    cap: Optional[int] = None
    q1: bool = False
    name: Optional[str] = None
    degree: Optional[str] = None


def _split_options(args: Sequence[str]) -> Tuple[List[str], CommandOptions]:
    positional: List[str] = []
    opts = CommandOptions()
    it = iter(args)
    for arg in it:
        if arg == "--q1":
            opts.q1 = True
        elif arg in ("--cap", "--name", "--degree"):
            value = next(it, None)
            if value is None:
                raise ValidationError(f"option {arg} needs a value")
            if arg == "--cap":
                try:
                    opts.cap = int(value)
                except ValueError:
                    raise ValidationError(f"--cap expects an integer, got {value!r}") from None
                if opts.cap < 0:
                    raise ValidationError("--cap must be non-negative")
            else:
                setattr(opts, arg[2:], value)
        elif arg.startswith("--"):
            raise ValidationError(f"unknown option {arg}")
        else:
            positional.append(arg)
    return positional, opts


def _parse_degree(text: str) -> DegreeVector:
    body = text.strip().strip("()")
    try:
        return tuple(int(x) for x in body.split(",") if x.strip())
    except ValueError:
        raise ValidationError(f"cannot read degree {text!r}") from None


def _need(args: Sequence[str], n: int, usage: str):
    if len(args) < n:
        raise ValidationError(f"usage: {usage}")


def _cmd_check(ws: Workspace, args, cap, opts) -> CommandResult:
    ws.validate()
    counts = ws.summary()
    text = ", ".join(f"{n} {kind}" for kind, n in counts.items())
    return CommandResult("check", None, {"counts": counts}, [f"workspace ok: {text}"])


def _cmd_normalize(ws: Workspace, args, cap, opts) -> CommandResult:
    _need(args, 2, "normalize ALGEBRA ELEMENT")
    p = ws.algebra(args[0])
    a = p.element(args[1])
    nf = p.reduce(a)
    data = {"algebra": args[0], "input": str(a), "normal_form": str(nf)}
    if len(nf) == 1:
        data["coefficient"] = str(nf.items()[0][1])
    return CommandResult("normalize", None, data, [f"{args[0]}: {a} -> {nf}"])


def _cmd_groebner(ws: Workspace, args, cap, opts) -> CommandResult:
    _need(args, 1, "groebner ALGEBRA")
    p = ws.algebra(args[0])
    gb = p.groebner_basis
    basis = [str(g) for g in gb.basis]
    lines = [f"Groebner basis of {args[0]} ({len(basis)} elements):"] + [f"  {g}" for g in basis]
    return CommandResult("groebner", None, {"algebra": args[0], "basis": basis, "complete": gb.complete}, lines)


def _cmd_basis(ws: Workspace, args, cap, opts) -> CommandResult:
    _need(args, 1, "basis ALGEBRA [DEGREE]")
    p = ws.algebra(args[0])
    text = args[1] if len(args) > 1 else opts.degree
    deg = _parse_degree(text) if text else None
    monos = [render_monomial(p.algebra, e) or "1" for e in standard_monomials(p, deg, cap)]
    where = f" in degree {deg}" if deg is not None else ""
    lines = [f"{len(monos)} standard monomials of {args[0]}{where} up to total degree {cap}:"]
    lines += [f"  {m}" for m in monos]
    data = {"algebra": args[0], "degree": list(deg) if deg else None, "dimension": len(monos), "monomials": monos}
    return CommandResult("basis", cap, data, lines)


def _cmd_hom_constraints(ws: Workspace, args, cap, opts) -> CommandResult:
    _need(args, 2, "hom-constraints SOURCE TARGET")
    system = hom_constraints(ws.algebra(args[0]), ws.algebra(args[1]), cap)
    unknowns = [system.unknown_name(j) for j in range(len(system.unknowns))]
    equations = [str(e) for e in system.to_sympy()]
    lines = [f"{len(unknowns)} unknowns, {len(equations)} constraints"
             f" ({'linear' if system.is_linear else 'polynomial'})"]
    lines += [f"  {e} = 0" for e in equations]
    data = {"source": args[0], "target": args[1], "unknowns": unknowns,
            "constraints": equations, "linear": system.is_linear}
    return CommandResult("hom-constraints", cap, data, lines)


def _cmd_cover_check(ws: Workspace, args, cap, opts) -> CommandResult:
    _need(args, 1, "cover-check COVER")
    c = ws.cover(args[0])
    validate_cover(c)
    pairs = [f"{s} : {a}" for s, a in zip(c.elements, c.witnesses)]
    data = {"cover": args[0], "base": ws.name_of(c.base), "size": len(c), "pairs": pairs}
    lines = [f"cover {args[0]} on {data['base']}: {len(c)} charts, partition of unity ok"]
    return CommandResult("cover-check", None, data, lines)


def _cmd_glue(ws: Workspace, args, cap, opts) -> CommandResult:
    _need(args, 1, "glue COVER PART...")
    c = ws.cover(args[0])
    parts = list(args[1:])
    if len(parts) != len(c):
        raise ValidationError(f"cover {args[0]} has {len(c)} charts, got {len(parts)} parts", name=args[0])
    glued = glue(c, parts, cap)
    return CommandResult("glue", cap, {"cover": args[0], "glued": str(glued)}, [f"glued: {glued}"])


def _cmd_pullback_cover(ws: Workspace, args, cap, opts) -> CommandResult:
    _need(args, 2, "pullback-cover COVER MORPHISM")
    g = ws.morphism(args[1])
    pulled = pullback_cover(ws.cover(args[0]), g)
    name = opts.name or f"{args[0]}_{args[1]}"
    ws.add("covers", name, pulled)
    pairs = [f"{s} : {a}" for s, a in zip(pulled.elements, pulled.witnesses)]
    lines = [f"cover {name} on {ws.name_of(g.target)}:"] + [f"  {p}" for p in pairs]
    return CommandResult("pullback-cover", None, {"cover": name, "pairs": pairs}, lines)


def _cmd_compose(ws: Workspace, args, cap, opts) -> CommandResult:
    _need(args, 2, "compose F G")
    h = compose(ws.morphism(args[0]), ws.morphism(args[1]))
    name = opts.name or f"{args[0]}_{args[1]}"
    ws.add("morphisms", name, h)
    images = {g.name: str(img) for g, img in zip(h.source.generators, h.images)}
    lines = [f"{name} = {args[0]} o {args[1]}:"] + [f"  {k} -> {v}" for k, v in images.items()]
    return CommandResult("compose", None, {"morphism": name, "images": images}, lines)


def _cmd_inverse_check(ws: Workspace, args, cap, opts) -> CommandResult:
    _need(args, 1, "inverse-check HDERIVATION | inverse-check SPACE STAGE")
    if len(args) == 1:
        candidates, used_cap = [ws.hderivation(args[0])], None
    else:
        candidates, used_cap = te_aut_basis(ws.algebra(args[0]), ws.algebra(args[1]), cap), cap
    for k, d in enumerate(candidates):
        g, g_inv = tangent_lift(d)
        if not verify_inverse(g, g_inv):
            raise InvariantBreach(f"tangent point {k} and its inverse do not compose to the identity", index=k)
        _, back = tangent_split(g)
        if back != d:
            raise InvariantBreach(f"tangent point {k} does not split back to its derivation", index=k)
    data = {"checked": len(candidates), "inverse_ok": True, "roundtrip_ok": True}
    return CommandResult("inverse-check", used_cap, data, [f"{len(candidates)} tangent points: inverse and split ok"])


def _cmd_te_aut(ws: Workspace, args, cap, opts) -> CommandResult:
    _need(args, 2, "te-aut SPACE STAGE")
    space = ws.algebra(args[0])
    basis = te_aut_basis(space, ws.algebra(args[1]), cap)
    rendered = [{g.name: str(img) for g, img in zip(space.generators, v.images)} for v in basis]
    lines = [f"dim TeAut({args[0]})_{args[1]} = {len(basis)} at cap {cap}"]
    for k, v in enumerate(rendered, 1):
        lines.append(f"  v{k}: " + ", ".join(f"{g} -> {img}" for g, img in v.items()))
    data = {"space": args[0], "stage": args[1], "dimension": len(basis), "basis": rendered}
    return CommandResult("te-aut", cap, data, lines)


def _cmd_der_basis(ws: Workspace, args, cap, opts) -> CommandResult:
    _need(args, 1, "der-basis ALGEBRA")
    p = ws.algebra(args[0])
    deg = _parse_degree(opts.degree) if opts.degree else None
    basis = der_basis(p, cap, deg)
    rendered = [{g.name: str(c) for g, c in zip(p.generators, L.coeffs) if not c.is_zero()} for L in basis]
    lines = [f"dim der({args[0]}) = {len(basis)} at cap {cap}"]
    for k, L in enumerate(rendered, 1):
        lines.append(f"  L{k} = " + " + ".join(f"({c})*d_{g}" for g, c in L.items()))
    return CommandResult("der-basis", cap, {"algebra": args[0], "dimension": len(basis), "basis": rendered}, lines)


def _cmd_bracket(ws: Workspace, args, cap, opts) -> CommandResult:
    _need(args, 2, "bracket X Y")
    kinds = {ws.kind_of(args[0]), ws.kind_of(args[1])}
    if kinds == {"derivations"}:
        L = der_bracket(ws.derivation(args[0]), ws.derivation(args[1]))
        terms = {g.name: str(c) for g, c in zip(L.algebra.generators, L.coeffs) if not c.is_zero()}
        kind = "derivations"
    elif kinds == {"hderivations"}:
        L = hder_bracket(ws.hderivation(args[0]), ws.hderivation(args[1]))
        terms = {g.name: str(img) for g, img in zip(L.space.generators, L.images) if not img.is_zero()}
        kind = "hderivations"
    else:
        raise ValidationError(f"bracket needs two derivations or two H-derivations, got {args[0]!r} and {args[1]!r}")
    if opts.name:
        ws.add(kind, opts.name, L)
    lines = [f"[{args[0]}, {args[1]}] = " + (", ".join(f"{g} -> {v}" for g, v in terms.items()) or "0")]
    return CommandResult("bracket", None, {"bracket": terms, "zero": not terms}, lines)


def _cmd_xi_check(ws: Workspace, args, cap, opts) -> CommandResult:
    _need(args, 2, "xi-check SPACE STAGE")
    report = verify_xi_iso(ws.algebra(args[0]), ws.algebra(args[1]), cap)
    data = asdict(report)
    data["bijective"] = report.bijective
    verdict = "bijective" if report.bijective else "NOT bijective"
    lines = [f"dimensions {report.j_dim} = {report.te_dim}, rank {report.rank}, {verdict}"
             f" (cap {cap}); brackets {'agree' if report.bracket_ok else 'DISAGREE'}"]
    lines += [f"  {f}" for f in report.failures]
    return CommandResult("xi-check", cap, data, lines, ok=report.bijective and report.bracket_ok)


COMMANDS: Dict[str, Callable[..., CommandResult]] = {
    "check": _cmd_check,
    "normalize": _cmd_normalize,
    "groebner": _cmd_groebner,
    "basis": _cmd_basis,
    "hom-constraints": _cmd_hom_constraints,
    "cover-check": _cmd_cover_check,
    "glue": _cmd_glue,
    "pullback-cover": _cmd_pullback_cover,
    "compose": _cmd_compose,
    "inverse-check": _cmd_inverse_check,
    "te-aut": _cmd_te_aut,
    "der-basis": _cmd_der_basis,
    "bracket": _cmd_bracket,
    "xi-check": _cmd_xi_check,
}

# Commands that add their result to the workspace.
STORING_COMMANDS = ("pullback-cover", "compose")


def run_command(ws: Workspace, command: Union[str, Command, Sequence[str]],
                cap: int = DEFAULT_CAP, q1: bool = False) -> CommandResult:
    """
    Dispatch one command against ws.

    Options inside the command (--cap, --q1, --name, --degree) override the
    keyword arguments. Results carrying a cap are recorded in ws.notes.

    Raises:
        UnknownCommand: no such command
        ValidationError: a storing command or --name is combined with --q1
    """
    if isinstance(command, str):
        command = parse_command(command)
    elif not isinstance(command, Command):
        command = Command(command[0], tuple(command[1:]))
    handler = COMMANDS.get(command.name)
    if handler is None:
        known = ", ".join(sorted(COMMANDS))
        raise UnknownCommand(f"unknown command {command.name!r} (known: {known})", name=command.name)
    positional, opts = _split_options(command.args)
    if opts.cap is not None:
        cap = opts.cap
    q1 = q1 or opts.q1
    if q1 and (command.name in STORING_COMMANDS or opts.name):
        raise ValidationError(
            f"{command.name} would store its result in the q = 1 copy of the workspace; run it without --q1",
            name=command.name,
        )
    target = specialize_workspace(ws) if q1 else ws
    result = handler(target, positional, cap, opts)
    result.data["q1"] = q1
    if result.cap is not None:
        ws.notes.append(" ".join([command.name] + positional + [f"cap={result.cap}"] + (["q1"] if q1 else [])))
    return result


def run_workspace(ws: Workspace, cap: int = DEFAULT_CAP, q1: bool = False) -> List[CommandResult]:
    """Execute the embedded commands in order."""
    return [run_command(ws, c, cap, q1) for c in list(ws.commands)]
