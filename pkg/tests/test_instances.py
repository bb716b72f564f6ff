import json
import logging

import pytest

from ptsc.instances import (
    GenConfig,
    GenerationError,
    InstanceError,
    dump_instance,
    instance_hash,
    load_instance,
    parse_instance,
    random_instance,
)
from ptsc.structural import is_structurally_controllable


def test_fixture_contents(f1_path, f2_path):
    s1, s2 = load_instance(f1_path), load_instance(f2_path)
    assert s1.n == s2.n == 4
    assert s1.a_bar == s2.a_bar and s1.b_bar.stars == {(1, 1)}
    assert s1.f_bar.stars == {(1, 3), (1, 4)}
    assert s2.f_bar.stars == {(3, 3), (4, 5)}


def test_truncated_json_names_position():
    with pytest.raises(InstanceError, match="line 1, column"):
        parse_instance('{"n": 4, "A_stars": [[1, 2]')


@pytest.mark.parametrize(
    "doc, field",
    [
        ({"n": 0}, "n"),
        ({"n": 2, "A_stars": [[1, 3]]}, r"A_stars\[0\]"),
        ({"n": 2, "b_stars": [[3]]}, r"b_stars\[0\]"),
        ({"n": 2, "F_stars": [[1, 1], [2, 4]]}, r"F_stars\[1\]"),
        ({"n": 2, "A_stars": [[1, "x"]]}, r"A_stars\[0\]"),
        ({"n": 2, "A_stars": {}}, "A_stars"),
        ([1, 2], "top level"),
    ],
)
def test_field_errors_named(doc, field):
    with pytest.raises(InstanceError, match=field):
        parse_instance(json.dumps(doc))


def test_input_column_allowed_in_F_only():
    sys = parse_instance('{"n": 2, "F_stars": [[1, 3]], "b_stars": [1]}')
    assert sys.edges == [(1, 3)]


def test_duplicates_dropped_with_warning(caplog):
    with caplog.at_level(logging.WARNING):
        sys = parse_instance('{"n": 2, "A_stars": [[2, 1], [2, 1]], "b_stars": [1, [1]]}')
    assert sys.a_bar.stars == {(2, 1)} and sys.b_bar.stars == {(1, 1)}
    assert sum("duplicate" in r.message for r in caplog.records) == 2


def test_dump_parse_round_trip(f2_path):
    sys = load_instance(f2_path)
    text = dump_instance(sys)
    assert parse_instance(text) == sys
    assert dump_instance(parse_instance(text)) == text


def test_hash_ignores_name_and_order():
    a = parse_instance('{"name": "x", "n": 2, "A_stars": [[2, 1], [1, 2]], "b_stars": [1]}')
    b = parse_instance('{"n": 2, "A_stars": [[1, 2], [2, 1]], "b_stars": [1]}')
    assert instance_hash(a) == instance_hash(b)
    assert instance_hash(a).startswith("sha256:")


def test_generator_deterministic():
    cfg = GenConfig(4, density_a=0.3)
    assert dump_instance(random_instance(cfg, 7)) == dump_instance(random_instance(cfg, 7))


def test_generator_cap():
    with pytest.raises(GenerationError, match="density"):
        random_instance(GenConfig(2, density_a=0.0, require_struct_ctrl=True, max_attempts=50), 0)


def test_generator_post_condition():
    sys = random_instance(GenConfig(5, density_a=0.4, density_f=0.1, require_struct_ctrl=True), 1)
    assert is_structurally_controllable(sys.a_bar, sys.b_bar)


def test_generator_backbone_and_f_count():
    sys = random_instance(GenConfig(30, density_a=0.0, density_b=0.0, f_count=4, backbone=True), 2)
    assert len(sys.edges) == 4
    assert is_structurally_controllable(sys.a_bar, sys.b_bar)


def test_density_validated():
    with pytest.raises(ValueError):
        GenConfig(3, density_a=1.5)
