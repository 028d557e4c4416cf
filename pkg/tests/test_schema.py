import random

import pytest

from conftest import DEMO
from safepipe.schema import (
    Add, ColumnType, Drop, EffectError, Keep, Remove, Rename, Retype, Schema,
    apply_effects, infer_csv_schema,
)

I, F, B, S = (ColumnType.INT, ColumnType.FLOAT, ColumnType.BOOL,
              ColumnType.STRING)


def schema_of(*pairs):
    return Schema(tuple(pairs))


# --- CSV inference ----------------------------------------------------------


def write_csv(tmp_path, text):
    p = tmp_path / "t.csv"
    p.write_text(text)
    return str(p)


def test_infer_simple(tmp_path):
    path = write_csv(tmp_path,
                     "age,name,survived\n22,Alice,true\n35,Bob,false\n")
    schema, diags = infer_csv_schema(path)
    assert not diags
    assert schema == schema_of(("age", I), ("name", S), ("survived", B))


def test_int_widens_to_float(tmp_path):
    path = write_csv(tmp_path, "x\n1\n2.5\n")
    schema, _ = infer_csv_schema(path)
    assert schema == schema_of(("x", F))


def test_empty_cells_ignored(tmp_path):
    path = write_csv(tmp_path, "x,y\n1,\n2,z\n")
    schema, _ = infer_csv_schema(path)
    assert schema == schema_of(("x", I), ("y", S))


def test_empty_file_is_e032(tmp_path):
    path = write_csv(tmp_path, "")
    schema, diags = infer_csv_schema(path)
    assert schema is None
    assert [d.code for d in diags] == ["E032"]


def test_duplicate_header_is_e033(tmp_path):
    path = write_csv(tmp_path, "a,a\n1,2\n")
    _, diags = infer_csv_schema(path)
    assert [d.code for d in diags] == ["E033"]


def test_ragged_row_is_e034(tmp_path):
    path = write_csv(tmp_path, "a,b\n1\n")
    _, diags = infer_csv_schema(path)
    assert [d.code for d in diags] == ["E034"]


TITANIC_ORACLE = schema_of(
    ("passengerId", I), ("pclass", I), ("name", S), ("sex", S), ("age", F),
    ("sibsp", I), ("parch", I), ("ticket", S), ("fare", F), ("cabin", S),
    ("embarked", S), ("survived", B),
)


def test_titanic_fixture_matches_hand_oracle():
    schema, diags = infer_csv_schema(str(DEMO / "data" / "titanic.csv"))
    assert not diags
    assert schema == TITANIC_ORACLE


# --- effect algebra ---------------------------------------------------------


def test_keep_preserves_order():
    s = schema_of(("a", I), ("b", S), ("c", F))
    assert apply_effects(s, [Keep(("c", "a"))]) == schema_of(("a", I), ("c", F))


def test_rename_then_retype():
    s = schema_of(("a", I))
    out = apply_effects(s, [Rename("a", "b"), Retype("b", F)])
    assert out == schema_of(("b", F))


def test_remove_missing_column():
    with pytest.raises(EffectError) as exc:
        apply_effects(schema_of(("a", I)), [Remove("z")])
    assert exc.value.code == "E030"


def test_add_existing_column():
    with pytest.raises(EffectError) as exc:
        apply_effects(schema_of(("a", I)), [Add("a", F)])
    assert exc.value.code == "E036"


# --- randomized equivalence against a materialized-table oracle -------------
#
# The oracle represents a dataset as an actual list of (name, type) cells
# in a toy "table" (a list of column dicts) and mutates it directly, with
# no shared code with the effect algebra.


def oracle_apply(columns, effects):
    """columns: list of {"name": n, "type": t} dicts; returns list or error code."""
    cols = [dict(c) for c in columns]

    def names():
        return [c["name"] for c in cols]

    for eff in effects:
        if isinstance(eff, Add):
            if eff.name in names():
                return "E036"
            cols.append({"name": eff.name, "type": eff.type})
        elif isinstance(eff, Remove):
            if eff.name not in names():
                return "E030"
            cols = [c for c in cols if c["name"] != eff.name]
        elif isinstance(eff, Rename):
            if eff.old not in names():
                return "E030"
            if eff.new != eff.old and eff.new in names():
                return "E036"
            for c in cols:
                if c["name"] == eff.old:
                    c["name"] = eff.new
        elif isinstance(eff, Retype):
            if eff.name not in names():
                return "E030"
            for c in cols:
                if c["name"] == eff.name:
                    c["type"] = eff.type
        elif isinstance(eff, Keep):
            for n in eff.names:
                if n not in names():
                    return "E030"
            cols = [c for c in cols if c["name"] in eff.names]
        elif isinstance(eff, Drop):
            for n in eff.names:
                if n not in names():
                    return "E030"
            cols = [c for c in cols if c["name"] not in eff.names]
    return cols


NAMES = ["a", "b", "c", "d", "e", "f"]
TYPES = [I, F, B, S]


def random_effect(rng):
    kind = rng.randrange(6)
    if kind == 0:
        return Add(rng.choice(NAMES), rng.choice(TYPES))
    if kind == 1:
        return Remove(rng.choice(NAMES))
    if kind == 2:
        return Rename(rng.choice(NAMES), rng.choice(NAMES))
    if kind == 3:
        return Retype(rng.choice(NAMES), rng.choice(TYPES))
    picked = tuple(rng.sample(NAMES, rng.randint(1, 3)))
    return Keep(picked) if kind == 4 else Drop(picked)


def random_schema(rng):
    picked = rng.sample(NAMES, rng.randint(0, len(NAMES)))
    return Schema(tuple((n, rng.choice(TYPES)) for n in picked))


def run_equivalence(cases, seed):
    rng = random.Random(seed)
    mismatches = 0
    for _ in range(cases):
        schema = random_schema(rng)
        effects = [random_effect(rng) for _ in range(rng.randint(0, 5))]
        try:
            got = [{"name": n, "type": t}
                   for n, t in apply_effects(schema, effects).columns]
        except EffectError as exc:
            got = exc.code
        want = oracle_apply(
            [{"name": n, "type": t} for n, t in schema.columns], effects)
        if got != want:
            mismatches += 1
    return mismatches


def test_effects_match_bruteforce_oracle():
    assert run_equivalence(500, seed=20250825) == 0
