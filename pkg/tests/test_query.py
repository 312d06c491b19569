"""Query DSL: parser, printer, typecheck, evaluation semantics."""

import numpy as np
import pytest

from cohortlab.dataset.synth import default_codebook
from cohortlab.query import (
    And,
    BoolLit,
    Compare,
    ExistsBp,
    HasEvent,
    In,
    MissingField,
    Not,
    Or,
    ParseError,
    TypeMismatch,
    UnknownEventKind,
    UnknownLabel,
    Window,
    evaluate,
    parse,
    print_query,
    typecheck,
)
from cohortlab.query.typecheck import compile_query

from conftest import tiny_codebook, tiny_store
from oracles import PrintableGen, QueryGen, build_views, oracle_evaluate


# ---------------------------------------------------------------------------
# parser


def test_parse_conjunction_fixture():
    ast = parse("male == 1 and age >= 65 and toast == 1")
    assert ast == And((
        Compare("male", "==", 1),
        Compare("age", ">=", 65),
        Compare("toast", "==", 1),
    ))


def test_parse_exists_fixture():
    ast = parse("exists(bp.sbp, hours(0,48), value > 160)")
    assert ast == ExistsBp("sbp", Window(0, 48), ">", 160)


def test_parse_bool_literal():
    assert parse("true") == BoolLit(True)
    assert parse("FALSE") == BoolLit(False)


def test_parse_truncated_input_offset():
    with pytest.raises(ParseError) as exc:
        parse("age >")
    assert exc.value.offset == 5
    assert exc.value.found == "end of input"


def test_parse_precedence():
    ast = parse("male == 1 or age >= 65 and not toast == 2")
    assert ast == Or((
        Compare("male", "==", 1),
        And((Compare("age", ">=", 65), Not(Compare("toast", "==", 2)))),
    ))


def test_parse_parens_group():
    ast = parse("(male == 1 or age >= 65) and toast == 2")
    assert ast == And((
        Or((Compare("male", "==", 1), Compare("age", ">=", 65))),
        Compare("toast", "==", 2),
    ))


def test_keywords_case_insensitive_fields_case_sensitive():
    ast = parse("Male == 1 AND age >= 65 OR NOT toast == 2")
    assert ast == Or((
        And((Compare("Male", "==", 1), Compare("age", ">=", 65))),
        Not(Compare("toast", "==", 2)),
    ))


def test_parse_membership():
    assert parse("toast in [1, 2, 3]") == In("toast", (1, 2, 3))
    assert parse('toast in ["LAA"]') == In("toast", ("LAA",))


def test_parse_number_forms():
    assert parse("age > -5") == Compare("age", ">", -5)
    assert parse("age > 1.5e2") == Compare("age", ">", 150.0)
    assert parse("age > .5") == Compare("age", ">", 0.5)


def test_parse_has_event():
    assert parse("has_event(symHT)") == HasEvent("symHT", None)
    assert parse("has_event(symHT, hours(24,48))") == HasEvent("symHT", Window(24, 48))


def test_parse_field_named_like_keyword_prefix():
    # "order" starts with "or" but is one identifier
    assert parse("order == 1") == Compare("order", "==", 1)


def test_parse_exists_as_field_name():
    # exists without a following "(" is an ordinary field
    assert parse("exists == 1") == Compare("exists", "==", 1)


def test_parse_error_trailing_garbage():
    with pytest.raises(ParseError):
        parse("age > 5 age")


def test_parse_error_bad_window():
    with pytest.raises(ParseError):
        parse("exists(bp.sbp, hours(48,0), value > 160)")
    with pytest.raises(ParseError):
        parse("exists(bp.sbp, hours(-1,48), value > 160)")


def test_parse_error_unterminated_string():
    with pytest.raises(ParseError):
        parse('toast == "LAA')


def test_parse_error_offsets_are_bytes():
    text = 'toast == "ü" oder'
    with pytest.raises(ParseError) as exc:
        parse(text)
    assert exc.value.offset == len('toast == "ü" '.encode("utf-8"))


def test_window_constructor_enforces_bounds():
    with pytest.raises(ValueError):
        Window(10, 10)
    with pytest.raises(ValueError):
        Window(-1, 5)


# ---------------------------------------------------------------------------
# printer


def test_print_minimal_parens():
    a = Compare("age", ">=", 65)
    b = Compare("male", "==", 1)
    c = Compare("toast", "==", 2)
    assert print_query(And((a, b))) == "age >= 65 and male == 1"
    assert print_query(Or((And((a, b)), c))) == "age >= 65 and male == 1 or toast == 2"
    assert print_query(Not(Or((a, b)))) == "not (age >= 65 or male == 1)"


def test_print_preserves_nested_same_op():
    ast = parse("(age >= 65 and male == 1) and toast == 2")
    text = print_query(ast)
    assert text == "(age >= 65 and male == 1) and toast == 2"
    assert parse(text) == ast


def test_fixture_strings_are_canonical():
    for text in (
        "male == 1 and age >= 65 and toast == 1",
        "exists(bp.sbp, hours(0,48), value > 160)",
        "exists(bp.sbp, hours(0,48), value >= 180)",
    ):
        assert print_query(parse(text)) == text


def test_round_trip_random_asts():
    rng = np.random.default_rng(20240817)
    gen = PrintableGen(rng)
    for _ in range(300):
        ast = gen.ast()
        assert parse(print_query(ast)) == ast


# ---------------------------------------------------------------------------
# typecheck


@pytest.fixture(scope="module")
def codebook():
    return default_codebook()


def test_typecheck_label_resolution(codebook):
    tq = typecheck(parse('toast == "LAA"'), codebook)
    assert tq.ast == Compare("toast", "==", 1)
    assert typecheck(parse('toast == "laa"'), codebook).ast == Compare("toast", "==", 1)


def test_typecheck_missing_field_suggestions(codebook):
    with pytest.raises(MissingField) as exc:
        typecheck(parse("antiplatelet_time < 48"), codebook)
    assert exc.value.name == "antiplatelet_time"
    assert "antiplatelet" in exc.value.suggestions


def test_typecheck_true_empty_involved(codebook):
    tq = typecheck(parse("true"), codebook)
    assert tq.involved_fields == ()


def test_typecheck_involved_fields_order_dedup(codebook):
    tq = typecheck(
        parse("age >= 65 and exists(bp.sbp, hours(0,48), value > 160) "
              "and has_event(SYMHT) and age < 90"),
        codebook)
    assert tq.involved_fields == ("age", "sbp", "symHT")


def test_typecheck_type_mismatches(codebook):
    with pytest.raises(TypeMismatch):
        typecheck(parse('age == "old"'), codebook)
    with pytest.raises(TypeMismatch):
        typecheck(parse('toast < "LAA"'), codebook)
    with pytest.raises(TypeMismatch):
        typecheck(parse("sbp > 160"), codebook)  # bp series needs exists()
    with pytest.raises(TypeMismatch):
        typecheck(parse("toast == 1.5"), codebook)


def test_typecheck_unknown_label(codebook):
    with pytest.raises(UnknownLabel):
        typecheck(parse('toast == "XYZ"'), codebook)


def test_typecheck_unknown_event_kind(codebook):
    with pytest.raises(UnknownEventKind) as exc:
        typecheck(parse("has_event(banana)"), codebook)
    assert "symHT" in exc.value.known


def test_typecheck_canonicalizes_event_kind(codebook):
    tq = typecheck(parse("has_event(symht)"), codebook)
    assert tq.ast == HasEvent("symHT", None)


def test_typecheck_membership_labels(codebook):
    tq = typecheck(parse('toast in ["LAA", 2]'), codebook)
    assert tq.ast == In("toast", (1, 2))


def test_typecheck_source_text_canonical(codebook):
    tq = typecheck(parse('toast  ==  "LAA"   and  male==1'), codebook)
    assert tq.source_text == "toast == 1 and male == 1"


# ---------------------------------------------------------------------------
# evaluation semantics


def _store_missing_toast():
    return tiny_store([
        {"uid": "a", "male": 1.0, "age": 70.0, "toast": 1.0, "nihss_initial": 4.0},
        {"uid": "b", "male": 0.0, "age": 80.0, "toast": None, "nihss_initial": 2.0},
    ])


def test_missing_value_semantics():
    store = _store_missing_toast()
    cb = store.codebook
    assert evaluate(compile_query("toast == 1", cb), store) == {"a"}
    assert evaluate(compile_query("toast != 1", cb), store) == set()
    assert evaluate(compile_query("not toast == 1", cb), store) == {"b"}
    assert evaluate(compile_query("toast in [1, 2]", cb), store) == {"a"}


def test_true_returns_base(small_store):
    tq = compile_query("true", small_store.codebook)
    assert evaluate(tq, small_store) == set(small_store.uids)
    base = set(list(small_store.uids)[:5])
    assert evaluate(tq, small_store, base) == base


def test_age_below_zero_empty(small_store):
    tq = compile_query("age < 0", small_store.codebook)
    assert evaluate(tq, small_store) == set()


def test_unknown_base_uids_ignored(small_store):
    tq = compile_query("true", small_store.codebook)
    base = {small_store.uids[0], "ghost"}
    assert evaluate(tq, small_store, base) == {small_store.uids[0]}


def test_exists_window_half_open():
    store = tiny_store(
        [{"uid": "a", "male": 1.0, "age": 70.0, "toast": 1.0, "nihss_initial": 4.0}],
        bp_rows=[("a", 0.0, 170.0, 90.0), ("a", 48.0, 170.0, 90.0)],
    )
    cb = store.codebook
    assert evaluate(compile_query(
        "exists(bp.sbp, hours(0,48), value > 160)", cb), store) == {"a"}
    assert evaluate(compile_query(
        "exists(bp.sbp, hours(48,96), value > 160)", cb), store) == {"a"}
    assert evaluate(compile_query(
        "exists(bp.sbp, hours(1,48), value > 160)", cb), store) == set()


def test_has_event_interval_intersection():
    store = tiny_store(
        [{"uid": "a", "male": 1.0, "age": 70.0, "toast": 1.0, "nihss_initial": 4.0}],
        event_rows=[("a", "IAT", 10.0, 20.0), ("a", "symHT", 5.0, None)],
    )
    cb = store.codebook

    def hits(text):
        return evaluate(compile_query(text, cb), store) == {"a"}

    assert hits("has_event(IAT)")
    assert hits("has_event(IAT, hours(20,30))")  # touches interval end
    assert not hits("has_event(IAT, hours(0,10))")  # [0,10) ends before start
    assert hits("has_event(IAT, hours(0,10.5))")
    assert hits("has_event(symHT, hours(5,6))")  # point event at window lo
    assert not hits("has_event(symHT, hours(0,5))")
    assert not hits("has_event(recurrence)")


def test_conjunction_refinement(small_store):
    cb = small_store.codebook
    p = compile_query("age >= 65", cb)
    q = compile_query("male == 1", cb)
    both = compile_query("age >= 65 and male == 1", cb)
    assert evaluate(both, small_store) == evaluate(p, small_store) & evaluate(q, small_store)


def test_evaluate_monotone_in_base(small_store):
    rng = np.random.default_rng(3)
    gen = QueryGen(rng, small_store)
    uids = list(small_store.uids)
    for _ in range(20):
        tq = typecheck(gen.ast(), small_store.codebook)
        base = set(rng.choice(uids, size=40, replace=False))
        sub = evaluate(tq, small_store, base)
        assert sub <= base
        assert sub == evaluate(tq, small_store) & base


def test_oracle_equivalence_sample(small_store):
    rng = np.random.default_rng(11)
    gen = QueryGen(rng, small_store)
    views = build_views(small_store)
    for _ in range(60):
        tq = typecheck(gen.ast(), small_store.codebook)
        assert evaluate(tq, small_store) == oracle_evaluate(tq.ast, views)
