"""JSON model and final-state files.

Model file::

    {"kind": "checkerboard-srw", "T": 2, "window": [-4, 6],
     "parameters": {"up": "1/2"}, "sources": [0, 2]}

``kind`` may also be ``"brownian"`` (fields ``T`` and ``sources`` only).
Rationals are written as ``"p/q"`` strings or integers, never floats.
A model file may embed a final state under ``"state"``.

Final-state file::

    {"n": 2, "ghosts": [2],
     "positions": {"[1,3]": 0, "2": 2},
     "signs": {"2": "-"},
     "heir_box": {"[1,3]": [0, 2]}, "heir_box_ordered": false,
     "box": {"[1,3]": [0, 0], "2": [1, 10]}}

Role keys are ``"[a,b]"`` for heirs and the junction number for ghosts.
Only ``n`` is required; ``positions`` feed ``prob``/``symbolic``/``audit``,
``signs`` are needed when some ghost is unplaced and a ``box`` is given
(otherwise only the heir law is meaningful and ``signs_given`` is false), ``heir_box`` and ``box``
feed the box probabilities, and ``heir_positions`` (a list in label order,
reals allowed) overrides integer heir positions for the heir law (``heir_box_ordered`` intersects the heir box
with ``y_1 < y_2 < ...``; infinite ends are written ``"-inf"``/``"inf"``).  Positions are space coordinates on the final
slice.
"""
import json
import re
from dataclasses import dataclass
from typing import Optional

from .exact import to_fraction
from .labels import FinalState, Interval, Junction
from .spacetime import KINDS, ModelSpec

SCHEMA = "ghostcoal/1"


class SpecFileError(ValueError):
    pass


@dataclass(frozen=True)
class BrownianSpec:
    T: float
    sources: tuple
    kind: str = "brownian"


@dataclass(frozen=True)
class StateFile:
    state: FinalState
    heir_box: Optional[tuple] = None
    box: Optional[tuple] = None
    heir_box_ordered: bool = False
    signs_given: bool = True
    heir_positions: Optional[tuple] = None


def _fail(path, where, msg):
    raise SpecFileError(f"{path}: {where}: {msg}")


def load_json(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise SpecFileError(f"{path}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecFileError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from None


def _int(path, where, v):
    if isinstance(v, bool) or not isinstance(v, int):
        _fail(path, where, f"expected an integer, got {v!r}")
    return v


def _rational_tree(path, where, v):
    if isinstance(v, dict):
        return {k: _rational_tree(path, f"{where}.{k}", x) for k, x in v.items()}
    if isinstance(v, list):
        return [_rational_tree(path, f"{where}[{i}]", x) for i, x in enumerate(v)]
    if isinstance(v, float):
        _fail(path, where, "floats are not allowed; write rationals as \"p/q\"")
    if isinstance(v, str) and re.fullmatch(r"\s*-?\d+\s*(/\s*\d+\s*)?", v):
        try:
            return to_fraction(v)
        except (ValueError, ZeroDivisionError):
            _fail(path, where, f"bad rational {v!r}")
    return v


def parse_model(data, path="<model>"):
    if not isinstance(data, dict):
        _fail(path, "top level", "expected an object")
    kind = data.get("kind")
    if kind == "brownian":
        T = data.get("T")
        if isinstance(T, bool) or not isinstance(T, (int, float)) or T <= 0:
            _fail(path, "T", "Brownian horizon must be a positive number")
        src = data.get("sources")
        if not isinstance(src, list) or not src:
            _fail(path, "sources", "expected a nonempty list")
        return BrownianSpec(float(T), tuple(float(x) for x in src))
    if kind not in KINDS:
        _fail(path, "kind", f"expected one of {KINDS + ('brownian',)}, got {kind!r}")
    T = _int(path, "T", data.get("T"))
    window = data.get("window")
    if not isinstance(window, list) or len(window) != 2:
        _fail(path, "window", "expected [lo, hi]")
    window = (_int(path, "window[0]", window[0]), _int(path, "window[1]", window[1]))
    params = data.get("parameters", {})
    if not isinstance(params, dict):
        _fail(path, "parameters", "expected an object")
    if kind == "custom" and "edges" in params:
        edges = []
        for i, e in enumerate(params["edges"]):
            if not (isinstance(e, list) and len(e) == 3):
                _fail(path, f"parameters.edges[{i}]", "expected [[x, t], [x, t], weight]")
            u, v, w = e
            edges.append((tuple(u), tuple(v), _rational_tree(path, f"parameters.edges[{i}][2]", w)))
        params = dict(params, edges=edges)
    else:
        params = _rational_tree(path, "parameters", params)
    sources = data.get("sources")
    if sources is not None:
        if not isinstance(sources, list):
            _fail(path, "sources", "expected a list")
        sources = tuple(_int(path, f"sources[{i}]", x) for i, x in enumerate(sources))
    return ModelSpec(kind, T, window, params, sources)


def _role(path, where, key):
    m = re.fullmatch(r"\s*\[\s*(\d+)\s*,\s*(\d+)\s*\]\s*", str(key))
    if m:
        try:
            return Interval(int(m.group(1)), int(m.group(2)))
        except ValueError as e:
            _fail(path, where, str(e))
    if re.fullmatch(r"\s*\d+\s*", str(key)):
        try:
            return Junction(int(key))
        except ValueError as e:
            _fail(path, where, str(e))
    _fail(path, where, f"bad role key {key!r}; use \"[a,b]\" for heirs or a junction number")


def _bound(path, where, v):
    if isinstance(v, str) and v.strip() in ("-inf", "inf", "+inf"):
        return float(v)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        _fail(path, where, f"expected a number, got {v!r}")
    return v


def _intervals(path, field, table, roles):
    if not isinstance(table, dict):
        _fail(path, field, "expected an object keyed by role")
    out = {}
    for k, iv in table.items():
        r = _role(path, f"{field}.{k}", k)
        if r not in roles:
            _fail(path, f"{field}.{k}", f"{r} is not a role of this final state")
        if not (isinstance(iv, list) and len(iv) == 2):
            _fail(path, f"{field}.{k}", "expected [lo, hi]")
        out[r] = (_bound(path, f"{field}.{k}[0]", iv[0]), _bound(path, f"{field}.{k}[1]", iv[1]))
    return out


def parse_state(data, path="<state>"):
    if not isinstance(data, dict):
        _fail(path, "top level", "expected an object")
    n = _int(path, "n", data.get("n"))
    ghosts = data.get("ghosts", [])
    if not isinstance(ghosts, list):
        _fail(path, "ghosts", "expected a list")
    ghosts = [_int(path, f"ghosts[{i}]", g) for i, g in enumerate(ghosts)]
    positions = data.get("positions")
    pos = None
    if positions is not None:
        if not isinstance(positions, dict):
            _fail(path, "positions", "expected an object keyed by role")
        pos = {_role(path, f"positions.{k}", k): _int(path, f"positions.{k}", v)
               for k, v in positions.items()}
    signs = data.get("signs")
    if signs is not None and not isinstance(signs, dict):
        _fail(path, "signs", "expected an object keyed by junction")
    signs_given = True
    placed = {r.g for r in pos or () if isinstance(r, Junction)}
    unsigned = [g for g in ghosts if g not in placed and str(g) not in (signs or {})]
    if unsigned and "box" not in data:
        # heir laws do not depend on ghost signs; mark them as unknown
        signs = dict(signs or {}, **{str(g): "+" for g in unsigned})
        signs_given = False
    try:
        state = FinalState(n, ghosts, pos, signs)
    except (ValueError, TypeError, KeyError) as e:
        _fail(path, "state", str(e))
    roles = set(state.roles)
    heir_box = box = None
    if "heir_box" in data:
        table = _intervals(path, "heir_box", data["heir_box"], roles)
        missing = [h for h in state.heirs if h not in table]
        if missing:
            _fail(path, "heir_box", f"missing heirs {[str(h) for h in missing]}")
        heir_box = tuple(table[h] for h in state.heirs)
    if "box" in data:
        table = _intervals(path, "box", data["box"], roles)
        missing = [r for r in state.roles if r not in table]
        if missing:
            _fail(path, "box", f"missing roles {[str(r) for r in missing]}")
        box = tuple(table[r] for r in state.roles)
    heir_positions = data.get("heir_positions")
    if heir_positions is not None:
        if not isinstance(heir_positions, list) or len(heir_positions) != len(state.heirs):
            _fail(path, "heir_positions", f"expected a list of {len(state.heirs)} numbers")
        heir_positions = tuple(_bound(path, f"heir_positions[{i}]", y)
                               for i, y in enumerate(heir_positions))
    ordered = data.get("heir_box_ordered", False)
    if not isinstance(ordered, bool):
        _fail(path, "heir_box_ordered", "expected true or false")
    return StateFile(state, heir_box, box, ordered, signs_given, heir_positions)


def load_model(path):
    data = load_json(path)
    model = parse_model(data, path)
    embedded = None
    if isinstance(data, dict) and "state" in data:
        embedded = parse_state(data["state"], f"{path}: state")
    return model, embedded


def load_state(path):
    return parse_state(load_json(path), path)


def dump_state(state):
    """JSON-ready dictionary for a final state."""
    out = {"n": state.n, "ghosts": sorted(state.ghosts)}
    if state.positions:
        out["positions"] = {str(r): y for r, y in sorted(state.positions.items(),
                                                         key=lambda kv: kv[0].rank)}
    if state.signs:
        out["signs"] = {str(g): "+" if s > 0 else "-" for g, s in state.signs.items()}
    return out


def dump_model(spec):
    def enc(v):
        if isinstance(v, dict):
            return {k: enc(x) for k, x in v.items()}
        if isinstance(v, (list, tuple)):
            return [enc(x) for x in v]
        if hasattr(v, "denominator") and not isinstance(v, int):
            return f"{v.numerator}/{v.denominator}"
        return v

    out = {"kind": spec.kind, "T": spec.T, "window": list(spec.window),
           "parameters": enc(spec.parameters)}
    if spec.sources is not None:
        out["sources"] = list(spec.sources)
    return out
