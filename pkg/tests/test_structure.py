from __future__ import annotations

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nilcohom.corpus import get_entry, load_entry_object
from nilcohom.exactfield import ZERO, gr
from nilcohom.exterior import Form, standard_metric, wedge_power
from nilcohom.structure import (
    StructureError,
    family_derived,
    family_frame,
    family_from_dict,
    family_instantiate,
    family_to_dict,
    frame_change_bigrading,
    on_locus,
    operator_matrix,
    parse_structure_file,
    render_structure_file,
    structure_from_dict,
    validate,
)

IWASAWA = '{"n": 3, "name": "iwasawa", "d": {"3": {"12": "1"}}}'


def test_parse_examples():
    # [PAPER] the Iwasawa and balanced-example equations parse and validate
    s = parse_structure_file(IWASAWA)
    assert s.d1[2] == Form.monomial(3, (1, 2))
    rep = validate(s)
    assert rep.ok and rep.unimodular and rep.nilpotent
    assert validate(parse_structure_file('{"n": 3, "d": {"3": {"1~1": "1", "2~2": "-1"}}}')).ok


def test_parse_from_path(tmp_path):
    p = tmp_path / "iw.json"
    p.write_text(IWASAWA)
    assert parse_structure_file(p) == parse_structure_file(IWASAWA)


def test_non_integrable_input():
    with pytest.raises(StructureError, match="non-integrable"):
        parse_structure_file('{"n": 3, "d": {"3": {"~1~2": "1"}}}')


@pytest.mark.parametrize(
    "doc",
    [
        '{"n": 3, "d": {"3": {"21": "1"}}}',
        '{"n": 3, "d": {"3": {"1~4": "1"}}}',
        '{"n": 3, "d": {"4": {"12": "1"}}}',
        '{"n": 3, "d": {"3": {"x": "1"}}}',
        '{"d": {}}',
        "not json",
    ],
)
def test_malformed_inputs(doc):
    with pytest.raises(StructureError):
        parse_structure_file(doc)


def test_d_squared_failure_names_generator():
    with pytest.raises(StructureError) as exc:
        parse_structure_file('{"n": 3, "d": {"2": {"3~3": "1"}, "3": {"1~1": "1"}}}')
    assert "not a Lie-algebra differential" in str(exc.value)
    assert any("eta^2" in v for v in exc.value.violations)


def test_validation_is_structural():
    # [TRIVIAL] d eta^3 = eta^{12} + eta^{13} squares to zero and is accepted
    rep = validate(structure_from_dict({"n": 3, "d": {"3": {"12": "1", "13": "1"}}}))
    assert rep.ok and not rep.nilpotent


def test_nakamura_validates():
    # [PAPER] solvmanifold central-limit equations
    s = load_entry_object(get_entry("nakamura"))
    rep = validate(s)
    assert rep.ok and rep.unimodular and not rep.nilpotent


def test_displayed_derivative_formula():
    # [PAPER] d nu^{2 3bar} = -nu^{12 1bar} - nu^{2 1bar 2bar} on the central fibre
    s = load_entry_object(get_entry("example22"))
    got = s.d(Form.monomial(3, (2,), (3,)))
    assert got == Form.monomial(3, (1, 2), (1,), -1) + Form.monomial(3, (2,), (1, 2), -1)


@pytest.mark.parametrize("name", ["iwasawa", "prop52", "example1", "example22", "nakamura", "uv14_plus", "h14_25"])
def test_operator_identities(name):
    s = load_entry_object(get_entry(name))
    for p in range(4):
        for q in range(4):
            if p + 2 <= 3:
                assert (operator_matrix(s, "del", p + 1, q) @ operator_matrix(s, "del", p, q)).is_zero()
            if q + 2 <= 3:
                assert (operator_matrix(s, "delbar", p, q + 1) @ operator_matrix(s, "delbar", p, q)).is_zero()
            if p + 1 <= 3 and q + 1 <= 3:
                a = operator_matrix(s, "delbar", p + 1, q) @ operator_matrix(s, "del", p, q)
                b = operator_matrix(s, "del", p, q + 1) @ operator_matrix(s, "delbar", p, q)
                assert (a + b).is_zero()


@given(st.sampled_from(["iwasawa", "prop52", "example1", "nakamura", "uv14_minus"]), st.integers(0, 3), st.integers(0, 3))
def test_d_is_sum_of_del_and_delbar(name, p, q):
    s = load_entry_object(get_entry(name))
    a = Form.from_vector(3, p, q, tuple(gr(k % 3 - 1) for k in range(len(Form.zero(3).to_vector(p, q)))))
    assert s.d(a) == s.del_(a) + s.delbar(a)
    assert s.d(a.conjugate()) == s.d(a).conjugate()


@pytest.mark.parametrize("name", ["iwasawa", "prop52", "nakamura", "uv14_plus"])
def test_render_round_trip(name):
    s = load_entry_object(get_entry(name))
    text = render_structure_file(s)
    assert parse_structure_file(text) == s
    assert render_structure_file(parse_structure_file(text)) == text


# -- families ---------------------------------------------------------------


def test_prop61_fibres():
    f = load_entry_object(get_entry("prop61"))
    # [PAPER] the t=0 fibre is the central structure
    assert family_instantiate(f, {"t": "0"}) == load_entry_object(get_entry("example22"))
    # [DERIVED] (1-|t|^2)/|1-t|^2 at t=1/4 is (15/16)/(9/16), so the (2,2bar) coefficient is -10/3
    s = family_instantiate(f, {"t": "1/4"})
    assert s.d1[2].coefficient((2,), (2,)) == gr("-10/3")
    for t in ("1/4", "i/4", "(1+i)/2", "1/3+i/5"):
        assert family_derived(f, {"t": t}) == family_instantiate(f, {"t": t})


def test_prop62_fibre_coefficient():
    f = load_entry_object(get_entry("prop62"))
    # [PAPER] coefficient -conj(t)/(1-|t|^2) at t=1/2
    assert family_instantiate(f, {"t": "1/2"}).d1[2].coefficient((1, 2), ()) == gr("-2/3")
    for t in ("1/2", "i/3", "-1/10"):
        assert family_derived(f, {"t": t}) == family_instantiate(f, {"t": t})


def test_family_errors():
    f = load_entry_object(get_entry("prop61"))
    with pytest.raises(StructureError, match="pole"):
        family_instantiate(f, {"t": "1"})
    g = load_entry_object(get_entry("prop62"))
    with pytest.raises(StructureError, match="singular frame"):
        family_frame(g, {"t": "1"})
    with pytest.raises(ValueError):
        family_instantiate(load_entry_object(get_entry("eq14")), {"rho": "1"})


def test_locus():
    f = load_entry_object(get_entry("prop61"))
    assert on_locus(f, {"t": "0"}) and on_locus(f, {"t": "(1+i)/2"}) and on_locus(f, {"t": "1"})
    assert not on_locus(f, {"t": "1/4"})
    assert on_locus(load_entry_object(get_entry("prop62")), {"t": "0"}) is None


def test_frame_change_bigrading():
    g = load_entry_object(get_entry("prop62"))
    # the standard omega^2 stays pure under this frame, eta^{12|1bar 3bar} does not
    assert frame_change_bigrading(g, {"t": "1/10"}, wedge_power(standard_metric(3), 2)).keys() == {(2, 2)}
    om = Form.monomial(3, (1, 2), (1, 3))
    at0 = frame_change_bigrading(g, {"t": "0"}, om)
    assert at0 == {(2, 2): om}
    pieces = frame_change_bigrading(g, {"t": "1/10"}, om)
    total = Form.zero(3)
    for piece in pieces.values():
        total = total + piece
    assert total == om and len(pieces) > 1


def test_family_round_trip():
    for name in ("prop61", "prop62", "eq14"):
        doc = get_entry(name)["doc"]
        f = family_from_dict(doc)
        again = family_from_dict(json.loads(json.dumps(family_to_dict(f))))
        assert family_to_dict(again) == family_to_dict(f)
        assert again.base_env() == {p: ZERO for p in f.params}
