import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seshat.scheme import CheckingScheme, TierSpec
from seshat.textgrid import (
    EncodingError,
    Interval,
    InvalidDuration,
    KindError,
    ParseError,
    Point,
    StructureError,
    TextGrid,
    Tier,
    TierKind,
    Unit,
    annotated_units,
    generate_template,
    parse_textgrid,
    serialize_textgrid,
)

from conftest import MINIMAL_LONG, MULTI_TIER_LONG


class TestParsing:
    def test_minimal_long(self):
        tg = parse_textgrid(MINIMAL_LONG.encode())
        assert tg.xmin == 0.0
        assert tg.xmax == 2.5
        assert len(tg.tiers) == 1
        tier = tg.tiers[0]
        assert tier.name == "Utterance"
        assert tier.kind is TierKind.INTERVAL
        assert tier.items == (Interval(0.0, 2.5, ""),)

    def test_short_equals_long(self, corpus_fixtures):
        long = parse_textgrid(corpus_fixtures["minimal_long_utf8"])
        short = parse_textgrid(corpus_fixtures["minimal_short"])
        assert long == short

    def test_encodings_equal(self, corpus_fixtures):
        reference = parse_textgrid(corpus_fixtures["minimal_long_utf8"])
        for name in (
            "minimal_long_utf8_bom",
            "minimal_long_utf16_le",
            "minimal_long_utf16_be",
            "minimal_crlf",
        ):
            assert parse_textgrid(corpus_fixtures[name]) == reference, name

    def test_doubled_quote_escape(self, corpus_fixtures):
        tg = parse_textgrid(corpus_fixtures["quotes_long"])
        assert tg.tiers[0].items[0].text == 'say "stop"'

    def test_multiline_text(self, corpus_fixtures):
        tg = parse_textgrid(corpus_fixtures["multiline_text_long"])
        assert tg.tiers[0].items[0].text == "first line\nsecond line"

    def test_multi_tier_order_and_points(self):
        tg = parse_textgrid(MULTI_TIER_LONG.encode())
        assert tg.tier_names() == ["Patient", "Non-Patient", "Noise", "bell"]
        bell = tg.tier("bell")
        assert bell.kind is TierKind.POINT
        assert bell.items == (Point(1.5, "ding"), Point(8.0, "dong"))

    def test_undecodable_bytes(self):
        with pytest.raises(EncodingError):
            parse_textgrid(b"\xff\xff\x00\x41 garbage")

    def test_not_a_textgrid(self):
        with pytest.raises(ParseError):
            parse_textgrid(b'File type = "ooTextFile"\nObject class = "Pitch"\n\n0\n1\n')

    def test_syntax_error_carries_line(self):
        broken = MINIMAL_LONG.replace("xmax = 2.5 ", "xmax = pear ")
        with pytest.raises(ParseError) as err:
            parse_textgrid(broken.encode())
        assert err.value.line == 5
        assert "xmax" in str(err.value)

    def test_truncated_file(self):
        lines = MINIMAL_LONG.splitlines()[:-1]
        with pytest.raises(ParseError):
            parse_textgrid("\n".join(lines).encode())

    def test_gap_rejected_not_repaired(self):
        broken = MULTI_TIER_LONG.replace("xmin = 2 ", "xmin = 2.1 ")
        with pytest.raises(StructureError):
            parse_textgrid(broken.encode())

    def test_reversed_interval_rejected(self):
        broken = MINIMAL_LONG.replace(
            "            xmax = 2.5 ", "            xmax = -1 "
        )
        with pytest.raises(StructureError):
            parse_textgrid(broken.encode())

    def test_unknown_tier_class(self):
        broken = MINIMAL_LONG.replace('"IntervalTier"', '"WaveTier"')
        with pytest.raises(ParseError):
            parse_textgrid(broken.encode())

    def test_trailing_garbage_rejected(self):
        with pytest.raises(ParseError):
            parse_textgrid((MINIMAL_LONG + "leftover\n").encode())

    def test_absent_tiers_flag(self):
        doc = (
            'File type = "ooTextFile"\n'
            'Object class = "TextGrid"\n'
            "\n"
            "xmin = 0 \n"
            "xmax = 1 \n"
            "tiers? <absent> \n"
        )
        tg = parse_textgrid(doc.encode())
        assert tg.tiers == ()


class TestRoundTrip:
    def test_fixture_corpus_round_trips(self, corpus_fixtures):
        for name, raw in corpus_fixtures.items():
            first = parse_textgrid(raw)
            again = parse_textgrid(serialize_textgrid(first))
            assert again == first, name

    def test_zero_tiers_serializes(self):
        raw = serialize_textgrid(TextGrid(0.0, 1.0, ()))
        assert b"size = 0" in raw
        assert parse_textgrid(raw) == TextGrid(0.0, 1.0, ())


# Times are drawn as exact floats; tiling only ever compares floats that
# came from the same draw, so no rounding is involved anywhere.
_text = st.text(
    alphabet=st.characters(blacklist_categories=("Cs",), blacklist_characters="\r"),
    max_size=20,
)


@st.composite
def textgrids(draw) -> TextGrid:
    xmax = draw(st.floats(min_value=1.0, max_value=1000.0, allow_nan=False))
    n_tiers = draw(st.integers(min_value=0, max_value=4))
    tiers = []
    for i in range(n_tiers):
        name = draw(_text)
        if draw(st.booleans()):
            inner = draw(
                st.lists(
                    st.floats(min_value=0.0, max_value=xmax, exclude_min=True, exclude_max=True),
                    unique=True,
                    max_size=6,
                )
            )
            bounds = [0.0] + sorted(inner) + [xmax]
            items = tuple(
                Interval(a, b, draw(_text)) for a, b in zip(bounds, bounds[1:])
            )
            tiers.append(Tier(name, TierKind.INTERVAL, 0.0, xmax, items))
        else:
            times = sorted(
                draw(
                    st.lists(
                        st.floats(min_value=0.0, max_value=xmax, allow_nan=False),
                        unique=True,
                        max_size=5,
                    )
                )
            )
            items = tuple(Point(t, draw(_text)) for t in times)
            tiers.append(Tier(name, TierKind.POINT, 0.0, xmax, items))
    return TextGrid(0.0, xmax, tuple(tiers))


class TestRoundTripProperties:
    @given(tg=textgrids())
    @settings(max_examples=100, deadline=None)
    def test_parse_serialize_identity(self, tg: TextGrid):
        assert parse_textgrid(serialize_textgrid(tg)) == tg

    @given(text=_text)
    @settings(max_examples=200, deadline=None)
    def test_quotes_survive(self, text: str):
        tg = TextGrid(
            0.0,
            1.0,
            (Tier("t", TierKind.INTERVAL, 0.0, 1.0, (Interval(0.0, 1.0, text),)),),
        )
        assert parse_textgrid(serialize_textgrid(tg)).tiers[0].items[0].text == text


class TestTemplate:
    def test_three_tier_template(self, clinical_scheme):
        tg = generate_template(clinical_scheme, 60.0)
        assert tg.tier_names() == ["Patient", "Non-Patient", "Noise"]
        for tier in tg.tiers:
            assert tier.items == (Interval(0.0, 60.0, ""),)

    def test_single_tier_template(self):
        scheme = CheckingScheme((TierSpec("T"),))
        tg = generate_template(scheme, 1.0)
        assert len(tg.tiers) == 1
        assert tg.tiers[0].items[0] == Interval(0.0, 1.0, "")

    def test_bad_duration(self, clinical_scheme):
        for bad in (0.0, -3.0, float("nan"), float("inf")):
            with pytest.raises(InvalidDuration):
                generate_template(clinical_scheme, bad)


class TestAnnotatedUnits:
    def test_empty_tier_yields_nothing(self):
        tier = Tier("t", TierKind.INTERVAL, 0.0, 1.0, (Interval(0.0, 1.0, ""),))
        assert annotated_units(tier) == []

    def test_only_non_empty_intervals(self):
        tier = Tier(
            "t",
            TierKind.INTERVAL,
            0.0,
            3.0,
            (Interval(0, 1, ""), Interval(1, 2, "Patient"), Interval(2, 3, "")),
        )
        assert annotated_units(tier) == [Unit(1.0, 2.0, "Patient")]

    def test_whitespace_only_is_unannotated(self):
        tier = Tier(
            "t",
            TierKind.INTERVAL,
            0.0,
            2.0,
            (Interval(0, 1, "  "), Interval(1, 2, "\t\n")),
        )
        assert annotated_units(tier) == []

    def test_point_tier_rejected(self):
        tier = Tier("t", TierKind.POINT, 0.0, 1.0, (Point(0.5, "x"),))
        with pytest.raises(KindError):
            annotated_units(tier)


class TestInvariants:
    def test_gap_in_constructor(self):
        with pytest.raises(StructureError):
            Tier(
                "t",
                TierKind.INTERVAL,
                0.0,
                2.0,
                (Interval(0, 0.9, ""), Interval(1.0, 2.0, "")),
            )

    def test_first_interval_must_start_at_xmin(self):
        with pytest.raises(StructureError):
            Tier("t", TierKind.INTERVAL, 0.0, 2.0, (Interval(0.5, 2.0, ""),))

    def test_empty_interval_tier_rejected(self):
        with pytest.raises(StructureError):
            Tier("t", TierKind.INTERVAL, 0.0, 2.0, ())

    def test_points_strictly_increasing(self):
        with pytest.raises(StructureError):
            Tier("t", TierKind.POINT, 0.0, 2.0, (Point(1.0, "a"), Point(1.0, "b")))

    def test_grid_range_ordered(self):
        with pytest.raises(StructureError):
            TextGrid(2.0, 1.0, ())
