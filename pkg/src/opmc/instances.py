"""Declarative instance files.

An instance file is a JSON document with a versioned format tag that
describes a coefficient ring, a cooperad (by builder invocation), the
cogenerator module V and a sparse coderivation, plus options.  Parsing
runs the full validator cascade so that every command starts from a
checked structure.
"""

import json
from fractions import Fraction

from .builders import ass_cochains, barratt_eccles, com_cochains
from .cofree import Coderivation, cofree_build, completeness_check
from .errors import CompletenessError, InstanceFormatError, UnsupportedError
from .graded import BasisElement, GradedModule
from .rings import ring_make

FORMAT = "opmc-instance/1"

__all__ = [
    "FORMAT",
    "Instance",
    "parse_instance",
    "load_instance",
    "instance_to_dict",
    "write_instance",
    "parse_scalar",
    "scalar_str",
    "element_to_list",
    "element_from_list",
    "format_element",
    "make_problem",
]


def parse_scalar(s, ring):
    """Ring scalar from its string form (integers or a/b fractions)."""
    try:
        f = Fraction(str(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise InstanceFormatError(f"bad coefficient {s!r}: {exc}") from exc
    if not ring.contains_rationals and f.denominator != 1:
        raise InstanceFormatError(f"coefficient {s!r} is not integral")
    return ring.normalize(f if ring.contains_rationals else f.numerator)


def scalar_str(c):
    return str(c)


def element_to_list(el):
    return [[str(n), scalar_str(c)] for n, c in sorted(el.terms.items())]


def element_from_list(V, data):
    el = V.zero()
    for item in data:
        if not isinstance(item, (list, tuple)) or len(item) != 2:
            raise InstanceFormatError(f"bad element term {item!r}")
        name, coeff = item
        if name not in V.basis:
            raise InstanceFormatError(f"unknown module generator {name!r}")
        el = el.add(V.gen(name, parse_scalar(coeff, V.ring)))
    return el


def format_element(el):
    """Human-readable element with unit coefficients elided."""
    if el.is_zero():
        return "0"
    parts = []
    for n, c in sorted(el.terms.items(), key=lambda kv: str(kv[0])):
        parts.append(str(n) if c == 1 else f"{c}*{n}")
    return " + ".join(parts)


class Instance:
    """A parsed and validated instance."""

    def __init__(self, ring, cooperad, hopf, V, cofree, Qt, options, spec):
        self.ring = ring
        self.cooperad = cooperad
        self.hopf = hopf
        self.V = V
        self.cofree = cofree
        self.Qt = Qt
        self.options = options
        self.spec = spec


def _build_cooperad(ring, block, validate):
    kind = block.get("builder")
    r_max = block.get("r_max")
    if not isinstance(r_max, int) or r_max < 1:
        raise InstanceFormatError(f"cooperad r_max must be a positive int, got {r_max!r}")
    if kind == "ass":
        return ass_cochains(ring, r_max, validate=validate)
    if kind == "com":
        return com_cochains(ring, r_max, validate=validate)
    if kind == "be":
        d_max = block.get("d_max")
        n = block.get("n")
        if not isinstance(d_max, int) or d_max < 0:
            raise InstanceFormatError(f"bad d_max {d_max!r}")
        return barratt_eccles(ring, r_max, d_max, n=n, validate=validate)
    raise InstanceFormatError(f"unknown cooperad builder {kind!r}")


def parse_instance(doc, validate=True):
    """Instance from a decoded JSON document (dict)."""
    if not isinstance(doc, dict):
        raise InstanceFormatError("instance file must hold a JSON object")
    if doc.get("format") != FORMAT:
        raise InstanceFormatError(
            f"unsupported format tag {doc.get('format')!r} (expected {FORMAT!r})"
        )
    for key in ("ring", "cooperad", "module"):
        if key not in doc:
            raise InstanceFormatError(f"missing {key!r} block")
    ring = ring_make(doc["ring"])
    C, H = _build_cooperad(ring, doc["cooperad"], validate)
    basis = []
    for row in doc["module"]:
        try:
            basis.append(BasisElement(
                str(row["name"]), int(row["degree"]), int(row.get("weight", 1))
            ))
        except (KeyError, TypeError, ValueError) as exc:
            raise InstanceFormatError(f"bad module row {row!r}: {exc}") from exc
    V = GradedModule(ring, basis)
    options = dict(doc.get("options", {}))
    w_max = options.get("w_max", 3)
    if not isinstance(w_max, int) or w_max < 1:
        raise InstanceFormatError(f"bad w_max {w_max!r}")
    cf = cofree_build(C, V, w_max)
    comps = {}
    for row in doc.get("coderivation", []):
        try:
            r = int(row["arity"])
            inputs = tuple(str(x) for x in row.get("inputs", ()))
            cname = str(row["class"]) if r > 0 else C.unit_name
        except (KeyError, TypeError, ValueError) as exc:
            raise InstanceFormatError(f"bad coderivation row {row!r}: {exc}") from exc
        key = (r, cname, inputs)
        val = element_from_list(V, row.get("value", []))
        if key in comps:
            raise InstanceFormatError(f"duplicate coderivation entry {key!r}")
        comps[key] = val
    Qt = Coderivation(cf, comps)
    if validate:
        report = completeness_check(Qt)
        if not report["complete"]:
            kind, key, *_ = report["violations"][0]
            raise CompletenessError(
                f"coderivation is not complete: {kind} at entry {key!r}"
            )
    return Instance(ring, C, H, V, cf, Qt, options, doc)


def load_instance(path, validate=True):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(
            f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}"
        ) from exc
    return parse_instance(doc, validate=validate)


def instance_to_dict(inst):
    """Canonical (sorted, reproducible) document for an instance."""
    Qt = inst.Qt
    rows = []
    for key in sorted(Qt.comps, key=lambda k: (k[0], str(k[1]), k[2])):
        r, cname, inputs = key
        rows.append({
            "arity": r,
            "class": str(cname),
            "inputs": list(inputs),
            "value": element_to_list(Qt.comps[key]),
        })
    mod = [
        {"name": n, "degree": inst.V.degree(n), "weight": inst.V.weight(n)}
        for n in sorted(inst.V.names, key=str)
    ]
    return {
        "format": FORMAT,
        "ring": inst.ring.spec(),
        "cooperad": dict(inst.spec["cooperad"]),
        "module": mod,
        "coderivation": rows,
        "options": dict(inst.options),
    }


def write_instance(inst, path):
    doc = instance_to_dict(inst)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def make_problem(inst, cap=None):
    """The convolution-complex problem for an instance.

    Builds the chain-coalgebra morphism matching the instance's
    cooperad: associative cochains receive the complexity-one
    restriction, permutation-tuple cochains act through themselves.
    """
    from .builders import be1_to_ass_iso, en_restriction_morphism
    from .mc_space import MCProblem

    kind = inst.spec["cooperad"].get("builder")
    C = inst.cooperad
    if kind == "ass":
        E, _ = barratt_eccles(inst.ring, C.r_max, 0, n=1, validate=False)
        phi = be1_to_ass_iso(E, C, validate=False)
    elif kind == "be":
        E = C
        phi = en_restriction_morphism(C, C, validate=False)
    else:
        raise UnsupportedError(
            f"no chain-coalgebra structure available for builder {kind!r}"
        )
    kwargs = {} if cap is None else {"cap": cap}
    return MCProblem(inst.Qt, phi, E, **kwargs)
