import pytest

from chebcert.params import ParamError, ParamSet, load_config, parse_expression


def test_defaults_valid():
    p = ParamSet()
    assert p.value("c16").contains(3144.25)
    assert p.rounding("c8_generic_round").contains(1 / 92)


def test_expression_forms():
    assert parse_expression("(3+sqrt(17))/4").contains((3 + 17**0.5) / 4)
    assert parse_expression("0.1").contains(0.1)
    assert not parse_expression("0.1").is_point
    assert parse_expression("2**3").contains(8)


def test_expression_rejects_code():
    with pytest.raises(ParamError):
        parse_expression("__import__('os')")


@pytest.mark.parametrize("kw", [{"b_zfr": "3.9"}, {"c_check": "12"}, {"delta_zfr": "1.5"},
                                {"sigma0_generic": "1"}, {"zfr_round": "-1"}])
def test_invariants(kw):
    with pytest.raises(ParamError):
        ParamSet().replace(**kw)


def test_unknown_field():
    with pytest.raises(ParamError):
        ParamSet().replace(bogus="1")


def test_empty_rounding():
    assert ParamSet(zfr_round="").rounding("zfr_round") is None


def test_dict_roundtrip():
    p = ParamSet().replace(c16=3500, c23="300")
    assert ParamSet.from_dict(p.to_dict()) == p
    assert p.c16 == "3500"


def test_config_file(tmp_path):
    cfg = tmp_path / "p.cfg"
    cfg.write_text("# tuned\nc16 = 3500\nb_zfr = 9   # wider\n")
    p = load_config(cfg, c23="200")
    assert (p.c16, p.b_zfr, p.c23) == ("3500", "9", "200")


def test_config_bad_line(tmp_path):
    cfg = tmp_path / "p.cfg"
    cfg.write_text("c16 3500\n")
    with pytest.raises(ParamError):
        load_config(cfg)
