import io
import json

import pytest

from tempomine.srl_ingest import (
    SchemaError,
    SrlFrame,
    SrlSentence,
    has_temporal_argument,
    is_temporal_role,
    parse_sentence,
    read_corpus,
    sentence_to_json_dict,
)


def make_record(**overrides) -> dict:
    record = {
        "doc_id": "d0",
        "sent_index": 0,
        "tokens": ["Jack", "rested", "for", "an", "hour"],
        "frames": [{"verb_index": 1, "args": [{"role": "ARGM-TMP", "span": [2, 5]}]}],
    }
    record.update(overrides)
    return record


def test_parse_valid_sentence():
    s = parse_sentence(make_record())
    assert s.doc_id == "d0"
    assert s.tokens == ("Jack", "rested", "for", "an", "hour")
    assert s.frames[0].verb_index == 1
    assert s.frames[0].arguments == (("ARGM-TMP", (2, 5)),)
    assert s.left_context is None and s.right_context is None


def test_parse_contexts():
    s = parse_sentence(make_record(left_context=["He", "was", "tired", "."],
                                   right_context=["Then", "he", "left", "."]))
    assert s.left_context == ("He", "was", "tired", ".")
    assert s.right_context == ("Then", "he", "left", ".")


@pytest.mark.parametrize(
    "mutation",
    [
        {"doc_id": 7},
        {"sent_index": -1},
        {"sent_index": "0"},
        {"tokens": []},
        {"tokens": ["a", 3]},
        {"tokens": "not a list"},
        {"frames": "nope"},
        {"frames": [{"verb_index": 9}]},
        {"frames": [{"verb_index": -1}]},
        {"frames": [{"verb_index": 1, "args": [{"role": "ARGM-TMP", "span": [3, 2]}]}]},
        {"frames": [{"verb_index": 1, "args": [{"role": "ARGM-TMP", "span": [2, 9]}]}]},
        {"frames": [{"verb_index": 1, "args": [{"role": "ARGM-TMP", "span": [0, 3]}]}]},
        {"frames": [{"verb_index": 1, "args": [{"role": 5, "span": [2, 5]}]}]},
        {"frames": [{"verb_index": 1, "args": [{"role": "ARGM-TMP", "span": [2]}]}]},
        {"left_context": [1, 2]},
    ],
)
def test_parse_rejects_schema_violations(mutation):
    with pytest.raises(SchemaError):
        parse_sentence(make_record(**mutation))


def test_span_overlapping_verb_rejected():
    bad = make_record(frames=[{"verb_index": 3,
                               "args": [{"role": "ARGM-TMP", "span": [2, 5]}]}])
    with pytest.raises(SchemaError, match="overlaps verb"):
        parse_sentence(bad)


def test_reader_skips_and_counts_malformed_lines():
    lines = [
        "# header comment",
        json.dumps(make_record()),
        "",
        "{not json",
        json.dumps(make_record(sent_index=-2)),
        json.dumps(make_record(sent_index=1)),
    ]
    reader = read_corpus(io.StringIO("\n".join(lines)))
    sentences = list(reader)
    assert len(sentences) == 2
    assert reader.records_read == 2
    assert reader.records_skipped == 2
    # errors carry 1-based line numbers of the offending lines
    assert [line_no for line_no, _ in reader.errors] == [4, 5]


def test_reader_ignores_comments_and_blanks_silently():
    text = "#a\n\n#b\n"
    reader = read_corpus(io.StringIO(text))
    assert list(reader) == []
    assert reader.records_read == 0
    assert reader.records_skipped == 0


def test_temporal_role_case_insensitive():
    assert is_temporal_role("ARGM-TMP")
    assert is_temporal_role("argm-tmp")
    assert is_temporal_role("Arg-Tmp")
    assert not is_temporal_role("ARG1")


def test_has_temporal_argument():
    assert has_temporal_argument(parse_sentence(make_record()))
    plain = make_record(frames=[{"verb_index": 1,
                                 "args": [{"role": "ARG1", "span": [2, 5]}]}])
    assert not has_temporal_argument(parse_sentence(plain))


def test_json_round_trip():
    original = make_record(left_context=["Before", "."],
                           right_context=["After", "."])
    sentence = parse_sentence(original)
    redumped = sentence_to_json_dict(sentence)
    assert parse_sentence(redumped) == sentence


def test_round_trip_omits_absent_contexts():
    obj = sentence_to_json_dict(parse_sentence(make_record()))
    assert "left_context" not in obj
    assert "right_context" not in obj


def test_frames_default_empty():
    record = make_record()
    del record["frames"]
    s = parse_sentence(record)
    assert s.frames == ()


def test_dataclasses_are_frozen():
    s = parse_sentence(make_record())
    with pytest.raises(AttributeError):
        s.doc_id = "other"
    f = SrlFrame(verb_index=0, arguments=())
    with pytest.raises(AttributeError):
        f.verb_index = 2
    assert isinstance(s, SrlSentence)
