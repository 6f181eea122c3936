import numpy as np
import pytest

from kolmo_lab.symbols import SymbolParseError, parse_symbol


def sample(text, z):
    return parse_symbol(text).sample(np.atleast_1d(np.asarray(z, dtype=complex)))[0]


class TestGrammar:
    def test_constant(self):
        assert sample("1", 0.3) == 1.0
        assert sample("2.5", 0.3) == 2.5

    def test_z_and_conj(self):
        z = 0.3 + 0.4j
        assert sample("z", z) == z
        assert sample("conj(z)", z) == np.conj(z)

    def test_abs_square(self):
        z = 0.3 + 0.4j
        assert sample("|z|^2", z) == pytest.approx(0.25)

    def test_sums_products(self):
        z = 0.2 - 0.1j
        assert sample("1-|z|^2", z) == pytest.approx(1.0 - abs(z) ** 2)
        assert sample("0.5*z*conj(z)+0.25", z) == pytest.approx(0.5 * abs(z) ** 2 + 0.25)

    def test_parentheses_and_unary_minus(self):
        z = 0.4
        assert sample("-(1-z)*2", z) == pytest.approx(-1.2)

    def test_whitespace(self):
        assert sample("  1 -  |z|^2 ", 0.5) == pytest.approx(0.75)

    def test_description_preserved(self):
        sym = parse_symbol("1-|z|^2")
        assert sym.description == "1-|z|^2"


class TestParseErrors:
    def test_dangling_operator_offset(self):
        with pytest.raises(SymbolParseError) as err:
            parse_symbol("1-")
        assert err.value.offset == 2

    def test_unknown_token(self):
        with pytest.raises(SymbolParseError) as err:
            parse_symbol("1+w")
        assert err.value.offset == 2

    def test_unbalanced_paren(self):
        with pytest.raises(SymbolParseError):
            parse_symbol("(1-z")

    def test_trailing_garbage(self):
        with pytest.raises(SymbolParseError) as err:
            parse_symbol("1 1")
        assert err.value.offset == 2

    def test_empty_input(self):
        with pytest.raises(SymbolParseError):
            parse_symbol("")
