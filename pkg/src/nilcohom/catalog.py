"""Built-in algebra catalog and user catalog files.

Catalog files are JSON documents:

    {
      "entries": [
        {
          "name": "h7",
          "equations": "(0,0,0,12,13,23)",
          "complex_structures": {"std": "std"},
          "lattices": {"example-a": {"numbers": {...},
                                     "generators": [[...], ...]}},
          "note": "free 2-step nilpotent on three generators"
        }
      ]
    }

Complex-structure specs are ``"std"`` (the pairing J e_{2i-1} = e_{2i}),
``"pairs:1-2,3-4,..."``, or an explicit matrix as a JSON list of rows.
Lattice documents share the number declarations and entry grammar of
period documents, restricted to real entries.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .cxstruct import AlmostComplexStructure, is_integrable
from .errors import ParseError, StructureError, UnsupportedError
from .exact.fields import QuadSurd, build_field, complexify
from .exact.linalg import Matrix
from .exact.numbers import ExactRational, QuadraticSurd
from .liealg import LieAlgebra, QStructure, parse_structure_equations
from .toroidal import _parse_entry_expr, number_spec_from_document


class CatalogEntry:
    def __init__(self, name, equations, complex_structures=None,
                 lattices=None, note=""):
        self.name = name
        self.equations = equations
        self.complex_structures = dict(complex_structures or {})
        self.lattices = dict(lattices or {})
        self.note = note

    def algebra(self) -> LieAlgebra:
        return parse_structure_equations(self.equations)

    def __repr__(self):
        return f"CatalogEntry({self.name!r})"


_H7_EXAMPLE_LATTICE = {
    "numbers": {"r2": {"type": "sqrt", "d": 2}, "a": {"type": "formal"}},
    "generators": [
        ["r2", "0", "0", "0", "0", "0"],
        ["0", "r2", "0", "0", "0", "0"],
        ["r2*a", "0", "r2", "0", "0", "0"],
        ["0", "0", "0", "1", "0", "0"],
        ["0", "0", "0", "0", "1", "0"],
        ["0", "0", "0", "a", "0", "-1"],
    ],
}


def builtin_catalog():
    """The shipped entries: the degenerate classics plus the
    six-dimensional free 2-step algebra with its worked lattice."""
    entries = [
        CatalogEntry("abelian6", "(0,0,0,0,0,0)", {"std": "std"},
                     note="abelian; the complex torus"),
        CatalogEntry("kodaira-thurston", "(0,0,0,12)", {"std": "std"},
                     note="4-dimensional nilpotent with one relation"),
        CatalogEntry("heis3r3", "(0,0,0,0,0,12)", {"std": "std"},
                     note="3-dim Heisenberg plus abelian R^3"),
        CatalogEntry("h7", "(0,0,0,12,13,23)", {"std": "std"},
                     {"example-a": _H7_EXAMPLE_LATTICE},
                     note="free 2-step nilpotent on three generators"),
    ]
    return {e.name: e for e in entries}


ALIASES = {"kt": "kodaira-thurston"}


def load_catalog_file(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"malformed catalog file (line {exc.lineno}): {exc.msg}")
    except OSError as exc:
        raise ParseError(f"cannot read catalog file: {exc}")
    entries = []
    if not isinstance(doc, dict) or "entries" not in doc:
        raise ParseError("catalog file must be an object with 'entries'")
    for item in doc["entries"]:
        try:
            entries.append(CatalogEntry(
                item["name"], item["equations"],
                item.get("complex_structures"),
                item.get("lattices"), item.get("note", "")))
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed catalog entry: {exc}")
    return {e.name: e for e in entries}


def validate_entry(entry: CatalogEntry):
    """Entries must pass the Jacobi check; every listed structure must
    be integrable."""
    g = entry.algebra()
    for name, spec in entry.complex_structures.items():
        J = resolve_complex_structure(g, spec)
        if not is_integrable(J):
            raise StructureError(
                f"catalog structure {entry.name}/{name} is not integrable")
    return g


def resolve_algebra(text, catalog=None):
    """A builtin name, alias, or structure-equation tuple."""
    catalog = catalog or builtin_catalog()
    name = ALIASES.get(text, text)
    if name in catalog:
        return catalog[name].algebra(), catalog[name]
    if text.strip().startswith("("):
        return parse_structure_equations(text), None
    raise ParseError(f"unknown algebra {text!r}; use a builtin name "
                     f"({', '.join(sorted(catalog))}) or a tuple")


def resolve_complex_structure(g: LieAlgebra, spec) -> AlmostComplexStructure:
    if isinstance(spec, str):
        if spec == "std":
            return AlmostComplexStructure.standard(g)
        if spec.startswith("pairs:"):
            pairs = []
            for chunk in spec[len("pairs:"):].split(","):
                a, _, b = chunk.partition("-")
                pairs.append((int(a), int(b)))
            return AlmostComplexStructure.from_pairs(g, pairs)
        if spec.startswith("["):
            rows = json.loads(spec)
            return AlmostComplexStructure(
                g, Matrix(g.field, [[Fraction(x) for x in r] for r in rows]))
        raise ParseError(f"unknown complex-structure spec {spec!r}")
    return AlmostComplexStructure(
        g, Matrix(g.field, [[Fraction(x) for x in r] for r in spec]))


def parse_number_override(text):
    """CLI value specs: '1/2', 'sqrt:2', 'quadratic:A,B,C[,root]',
    'formal', 'liouville10', 'power-tower[:base,start]'."""
    text = text.strip()
    if text == "formal":
        return {"type": "formal"}
    if text.startswith("sqrt:"):
        return {"type": "sqrt", "d": int(text[5:])}
    if text.startswith("quadratic:"):
        parts = text[len("quadratic:"):].split(",")
        doc = {"type": "quadratic", "poly": [int(x) for x in parts[:3]]}
        if len(parts) > 3:
            doc["root"] = parts[3]
        return doc
    if text == "liouville10" or text.startswith("power-tower"):
        doc = {"type": "convergents", "family": text}
        if ":" in text:
            fam, args = text.split(":", 1)
            parts = [int(x) for x in args.split(",")]
            doc = {"type": "convergents", "family": fam,
                   "base": parts[0],
                   "start": parts[1] if len(parts) > 1 else parts[0] ** 2}
        return doc
    return {"type": "rational", "value": text}


class LatticeData:
    def __init__(self, qstructure, algebra, field, param_spec):
        self.qstructure = qstructure
        self.algebra = algebra
        self.field = field
        self.param_spec = param_spec


def lattice_from_document(doc, g: LieAlgebra, overrides=None) -> LatticeData:
    """Build a rational structure over the declared tower field, with
    optional parameter substitutions from the command line."""
    overrides = overrides or {}
    numbers = dict(doc.get("numbers", {}))
    for name, text in overrides.items():
        if name not in numbers:
            raise ParseError(f"no declared number {name!r} to substitute")
        numbers[name] = parse_number_override(text)
    surd_d = None
    param_name = None
    param_spec = None
    elements = {}
    pending_surd = None
    for name, spec_doc in sorted(numbers.items()):
        spec = number_spec_from_document(spec_doc)
        if isinstance(spec, ExactRational):
            elements[name] = ("rational", spec.value)
        elif isinstance(spec, QuadraticSurd):
            u, v, d = spec.quad_field_coords()
            if surd_d is not None and surd_d != d:
                raise UnsupportedError(
                    "at most one quadratic extension is supported")
            surd_d = d
            elements[name] = ("surd", (u, v, d))
        elif spec is None:
            if param_name is not None:
                raise UnsupportedError("at most one formal parameter")
            param_name = name
            elements[name] = ("param", None)
        else:
            if param_name is not None:
                raise UnsupportedError("at most one formal parameter")
            param_name = name
            param_spec = spec
            elements[name] = ("param", None)
    field = build_field(surd_d, param_name)
    cfield = complexify(field)
    symbols = {}
    for name, (kind, payload) in elements.items():
        if kind == "rational":
            symbols[name] = cfield.coerce(payload)
        elif kind == "surd":
            u, v, d = payload
            elt = QuadSurd(u, v, d)
            if param_name is not None:
                elt = field.coerce(field.base.coerce(elt))
            symbols[name] = cfield.coerce(elt)
        else:
            symbols[name] = cfield.coerce(field.gen())
    gens = []
    for row in doc["generators"]:
        if len(row) != g.n:
            raise ParseError("lattice generator has the wrong length")
        vec = []
        for x in row:
            val = _parse_entry_expr(str(x), cfield, symbols)
            if val.im:
                raise ParseError("lattice entries must be real")
            vec.append(val.re)
        gens.append(vec)
    g2 = g.extend_field(field) if field != g.field else g
    return LatticeData(QStructure(g2, gens), g2, field, param_spec)


def load_lattice_file(path, g: LieAlgebra, overrides=None) -> LatticeData:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"malformed lattice file (line {exc.lineno}): {exc.msg}")
    except OSError as exc:
        raise ParseError(f"cannot read lattice file: {exc}")
    return lattice_from_document(doc, g, overrides)
