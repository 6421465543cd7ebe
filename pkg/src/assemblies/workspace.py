"""Line-based workspace files.

One declaration per line; ``#`` starts a comment.  Example::

    pca sk
    bound 8
    object Z = {0, 1}
    map s : Z -> Z { 0: 0, 1: 0 }
    assembly X on {a, b} { a: [K], b: [S, K K] }
    assembly N = nabla Z
    morphism f : X -> N map { a: 0, b: 1 } tracker auto
    relation R on X { a: [K] }
    relation T on X, N { (a,0): [K] }
    formula p = forall x:X. R(x) -> exists n:N. T(x, n)

Elements are integers or identifiers (tuples in parentheses); realizers are
written in the combinator syntax (``K``, ``S``, ``#atom``) and evaluated,
or as codes for the numeric algebra.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from . import pca as P
from .asm import Asm, Assembly, NeedMoreFuel, NotTracked
from .base import DomainError, FinMap, FinObject
from .logic import FormulaSyntaxError, Structure, parse_formula
from .pca import Defined


class WorkspaceError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        where = f"line {line}, column {col}: " if line else ""
        super().__init__(where + message)
        self.line, self.col = line, col


@dataclass
class Settings:
    pca: str = "sk"
    bound: int = 8
    fuel: int = 512
    search: int = 48
    seed: int = 0


@dataclass
class Workspace:
    settings: Settings = field(default_factory=Settings)
    objects: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    assemblies: dict = field(default_factory=dict)
    morphisms: dict = field(default_factory=dict)
    structure: Structure = field(default_factory=Structure)
    formulas: dict = field(default_factory=dict)
    ctx: Optional[Asm] = None


# ----------------------------------------------------------------------------
# Small parsers


def split_top(text: str, sep: str = ",") -> list:
    """Split on ``sep`` outside brackets and parentheses."""
    parts, depth, cur = [], 0, []
    for c in text:
        if c in "([{":
            depth += 1
        elif c in ")]}":
            depth -= 1
        if c == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(c)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*$")


def parse_elem(text: str):
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        return tuple(parse_elem(p) for p in split_top(text[1:-1]))
    if re.fullmatch(r"-?\d+", text):
        return int(text)
    if _IDENT.match(text) or text == "*":
        return text
    raise ValueError(f"bad element {text!r}")


def _braced(text: str) -> str:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ValueError("expected { ... }")
    return text[1:-1]


def parse_set(text: str) -> FinObject:
    return FinObject(parse_elem(p) for p in split_top(_braced(text)))


def parse_table(text: str) -> dict:
    """``{ k: v, ... }`` with values kept as text."""
    out = {}
    for item in split_top(_braced(text)):
        key, sep, val = _split_colon(item)
        if not sep:
            raise ValueError(f"expected key: value in {item!r}")
        out[parse_elem(key)] = val.strip()
    return out


def _split_colon(item: str):
    depth = 0
    for i, c in enumerate(item):
        if c in "([{":
            depth += 1
        elif c in ")]}":
            depth -= 1
        elif c == ":" and depth == 0:
            return item[:i], ":", item[i + 1:]
    return item, "", ""


def parse_element(pca: P.PCA, text: str):
    """An element of ``pca`` from combinator syntax (or a code, or '*')."""
    text = text.strip()
    try:
        return pca.parse(text)
    except P.TermSyntaxError:
        if isinstance(pca, P.SKModel):
            raise
    t = P.parse_term(text)
    r = pca.embed(t, 100_000)
    if not isinstance(r, Defined):
        raise ValueError(f"term {text!r} does not evaluate")
    return r.value


def parse_element_value(pca: P.PCA, text: str):
    """Like :func:`parse_element` but evaluates SK terms to values."""
    v = parse_element(pca, text)
    if isinstance(pca, P.SKModel):
        r = pca.embed(v, 100_000)
        if not isinstance(r, Defined):
            raise ValueError(f"term {text!r} does not evaluate")
        return r.value
    return v


def parse_realizers(pca: P.PCA, text: str) -> list:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ValueError("expected [ ... ]")
    return [parse_element_value(pca, p) for p in split_top(text[1:-1])]


# ----------------------------------------------------------------------------
# Loader


_DECL = {
    "object": re.compile(r"object\s+(\w+)\s*=\s*(\{.*\})$"),
    "map": re.compile(r"map\s+(\w+)\s*:\s*(\w+)\s*->\s*(\w+)\s*(\{.*\})$"),
    "assembly": re.compile(r"assembly\s+(\w+)\s+on\s+(\{.*?\})\s*(\{.*\})$"),
    "nabla": re.compile(r"assembly\s+(\w+)\s*=\s*nabla\s+(\w+)$"),
    "morphism": re.compile(r"morphism\s+(\w+)\s*:\s*(\w+)\s*->\s*(\w+)\s+map\s*(\{.*\})\s*(?:tracker\s+(.+))?$"),
    "relation": re.compile(r"relation\s+(\w+)\s+on\s+([\w\s,]+?)\s*(\{.*\})$"),
    "formula": re.compile(r"formula\s+(\w+)\s*=\s*(.+)$"),
    "setting": re.compile(r"(pca|bound|fuel|search|seed)\s+(\S+)$"),
}


def loads(text: str, overrides: Optional[dict] = None) -> Workspace:
    """Parse a workspace; ``overrides`` (command-line values) win over the
    file's settings, and may carry a ``filter``."""
    ws = Workspace()
    lines = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = "" if raw.lstrip().startswith("#") else _strip_comment(raw)
        if line:
            lines.append((n, line))

    # settings first so that realizers are read in the right algebra
    body = []
    for n, line in lines:
        m = _DECL["setting"].match(line)
        if m:
            key, val = m.groups()
            if key == "pca":
                if val not in P.INSTANCES:
                    raise WorkspaceError(f"unknown pca {val!r}", n, 1)
                ws.settings.pca = val
            else:
                if not val.isdigit():
                    raise WorkspaceError(f"{key} needs a natural number", n, len(key) + 2)
                setattr(ws.settings, key, int(val))
        else:
            body.append((n, line))
    overrides = dict(overrides or {})
    filt = overrides.pop("filter", None)
    for k, v in overrides.items():
        if v is not None:
            setattr(ws.settings, k, v)
    s = ws.settings
    ws.ctx = Asm(P.INSTANCES[s.pca], filter=filt, fuel=s.fuel, search=s.search, bound=s.bound)

    for n, line in body:
        try:
            _declare(ws, line)
        except WorkspaceError as exc:
            raise WorkspaceError(str(exc), n, 1) from None
        except (ValueError, KeyError, DomainError, NotTracked, NeedMoreFuel,
                FormulaSyntaxError, P.TermSyntaxError) as exc:
            msg = f"unknown name {exc}" if isinstance(exc, KeyError) else str(exc)
            raise WorkspaceError(msg, n, 1) from None
    return ws


def _strip_comment(raw: str) -> str:
    # '#name' is an atom; a comment is '#' followed by space or end of line
    m = re.search(r"#(\s|$)", raw)
    return (raw[:m.start()] if m else raw).strip()


def _declare(ws: Workspace, line: str) -> None:
    ctx, st = ws.ctx, ws.structure
    keyword = line.split(None, 1)[0]
    if keyword == "object":
        m = _need("object", line)
        ws.objects[m[1]] = parse_set(m[2])
    elif keyword == "map":
        m = _need("map", line)
        src, dst = ws.objects[m[2]], ws.objects[m[3]]
        table = {k: parse_elem(v) for k, v in parse_table(m[4]).items()}
        ws.maps[m[1]] = FinMap(src, dst, table)
    elif keyword == "assembly":
        m = _DECL["nabla"].match(line)
        if m:
            a = ctx.nabla(ws.objects[m[2]])
            asm = Assembly(a.carrier, a.rho_dict(), m[1])
        else:
            m = _need("assembly", line)
            carrier = parse_set(m[2])
            rs = {k: parse_realizers(ctx.pca, v) for k, v in parse_table(m[3]).items()}
            asm = Assembly(carrier, rs, m[1])
        ws.assemblies[m[1]] = asm
        st.sorts[m[1]] = asm
    elif keyword == "morphism":
        m = _need("morphism", line)
        src, dst = ws.assemblies[m[2]], ws.assemblies[m[3]]
        table = {k: parse_elem(v) for k, v in parse_table(m[4]).items()}
        choice = (m[5] or "auto").strip()
        tracker = None if choice == "auto" else parse_element_value(ctx.pca, choice)
        mor = ctx.morphism(src, dst, table, tracker)
        ws.morphisms[m[1]] = mor
        st.functions[m[1]] = mor
    elif keyword == "relation":
        m = _need("relation", line)
        sorts = [x.strip() for x in m[2].split(",")]
        for name in sorts:
            if name not in st.sorts:
                raise WorkspaceError(f"unknown sort {name!r}")
        table = {k: parse_realizers(ctx.pca, v) for k, v in parse_table(m[3]).items()}
        st.add_relation(m[1], sorts, table)
    elif keyword == "formula":
        m = _need("formula", line)
        p = parse_formula(m[2])
        st.check(p)
        ws.formulas[m[1]] = p
    else:
        raise WorkspaceError(f"unknown declaration {keyword!r}")


def _need(kind: str, line: str):
    m = _DECL[kind].match(line)
    if not m:
        raise WorkspaceError(f"malformed {kind} declaration")
    return m


def load(path: str, overrides: Optional[dict] = None) -> Workspace:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), overrides)


DEMO = """\
pca sk
bound 8
object Z = {0, 1}
object One = {0}
map s : Z -> One { 0: 0, 1: 0 }
assembly X on {a, b} { a: [K], b: [S] }
assembly Y on {0, 1} { 0: [K, S], 1: [K K] }
assembly W on {0, 1} { 0: [K, S], 1: [S] }
assembly N = nabla Z
morphism f : X -> N map { a: 0, b: 1 } tracker auto
morphism g : Y -> N map { 0: 0, 1: 1 } tracker auto
morphism h : X -> W map { a: 0, b: 1 } tracker auto
relation R on X { a: [K] }
relation Q on X { a: [K], b: [S] }
relation T on X, N { (a,0): [K], (b,1): [S] }
formula p = forall x:X. R(x) -> exists n:N. T(x, n)
formula q = exists x:X. R(x)
"""


def demo(overrides: Optional[dict] = None) -> Workspace:
    """The built-in workspace used when no file is given."""
    return loads(DEMO, overrides)
