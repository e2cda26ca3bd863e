import json
import math
from fractions import Fraction

import pytest

from ghostcoal.labels import FinalState, Interval, Junction
from ghostcoal.spacetime import ModelSpec, build_model
from ghostcoal.specfile import (BrownianSpec, SpecFileError, dump_model, dump_state, load_model,
                                load_state, parse_model, parse_state)


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_model_round_trip():
    spec = ModelSpec("checkerboard-srw", 3, (-5, 7), {"up": Fraction(1, 3)}, (0, 2))
    back = parse_model(json.loads(json.dumps(dump_model(spec))))
    assert back == spec
    assert build_model(back).T == 3


def test_model_with_embedded_state(tmp_path):
    data = {"kind": "checkerboard-srw", "T": 2, "window": [-4, 6], "sources": [0, 2],
            "state": {"n": 2, "ghosts": [2], "positions": {"[1,3]": 0, "2": 2}}}
    model, sf = load_model(_write(tmp_path, "m.json", json.dumps(data)))
    assert model.sources == (0, 2)
    assert sf.state.ghost_sign(2) == -1


def test_state_round_trip():
    s = FinalState(3, {2, 3}, {Interval(1, 4): 2, Junction(2): 0, Junction(3): 4})
    sf = parse_state(json.loads(json.dumps(dump_state(s))))
    assert sf.state == s and sf.signs_given


def test_state_boxes():
    sf = parse_state({"n": 2, "ghosts": [2], "positions": {"[1,3]": 0, "2": 2},
                      "heir_box": {"[1,3]": [0, 2]}, "box": {"[1,3]": [0, 0], "2": [1, "inf"]}})
    assert sf.heir_box == ((0, 2),)
    assert math.isinf(sf.box[1][1]) or math.isinf(sf.box[0][1])


def test_unsigned_ghosts_without_box():
    sf = parse_state({"n": 2, "ghosts": [2], "heir_positions": [0.5]})
    assert not sf.signs_given and sf.heir_positions == (0.5,)


def test_brownian_model():
    assert parse_model({"kind": "brownian", "T": 1, "sources": [0, 1]}) == BrownianSpec(1.0, (0.0, 1.0))
    with pytest.raises(SpecFileError, match="T"):
        parse_model({"kind": "brownian", "T": 0, "sources": [0]})


def test_json_syntax_error_has_line(tmp_path):
    path = _write(tmp_path, "bad.json", '{\n  "n": 2,\n  "ghosts": [2\n}')
    with pytest.raises(SpecFileError, match=r"line 4 column 1"):
        load_state(path)


def test_missing_file():
    with pytest.raises(SpecFileError, match="No such file"):
        load_state("/nonexistent/state.json")


@pytest.mark.parametrize("data, field", [
    ({"kind": "hex", "T": 2, "window": [0, 1]}, "kind"),
    ({"kind": "checkerboard-srw", "T": "2", "window": [0, 1]}, "T"),
    ({"kind": "checkerboard-srw", "T": 2, "window": [0]}, "window"),
    ({"kind": "checkerboard-srw", "T": 2, "window": [0, 4], "parameters": {"up": 0.5}},
     "parameters.up"),
    ({"kind": "checkerboard-srw", "T": 2, "window": [0, 4], "sources": [0.5]}, r"sources\[0\]"),
])
def test_model_errors_name_field(data, field):
    with pytest.raises(SpecFileError, match=field):
        parse_model(data)


@pytest.mark.parametrize("data, field", [
    ({"n": "2"}, "n"),
    ({"n": 2, "ghosts": [2], "positions": {"[1,x]": 0}}, r"positions\.\[1,x\]"),
    ({"n": 2, "ghosts": [2], "positions": {"[1,3]": 0, "2": 2}, "heir_box": {}}, "heir_box"),
    ({"n": 2, "ghosts": [2], "positions": {"[1,3]": 0, "2": 2}, "box": {"[1,3]": [0, 0]}}, "box"),
    ({"n": 2, "ghosts": [2], "box": {"[1,3]": [0, 0], "2": [1, 2]}}, "state"),
    ({"n": 2, "heir_box_ordered": "yes"}, "heir_box_ordered"),
    ({"n": 2, "ghosts": [2], "heir_positions": [0, 1]}, "heir_positions"),
    ({"n": 2, "ghosts": [2], "positions": {"[1,3]": 0, "2": 2},
      "heir_box": {"[1,2]": [0, 1]}}, "not a role"),
])
def test_state_errors_name_field(data, field):
    with pytest.raises(SpecFileError, match=field):
        parse_state(data)
