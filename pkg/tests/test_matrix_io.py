import numpy as np
import pytest

from catq import MatrixParseError, format_matrix, load_hamiltonian, parse_matrix, write_hamiltonian


def test_round_trip(tmp_path):
    h = np.array([[1 + 2j, -0.1], [1e-300j, 3.14159]])
    path = tmp_path / "h.txt"
    write_hamiltonian(path, h)
    np.testing.assert_array_equal(load_hamiltonian(path), h)
    assert path.read_bytes().count(b"\r") == 0


def test_format_layout():
    assert format_matrix([[1, 2j]] * 2) == "2\n1.0,0.0 0.0,2.0\n1.0,0.0 0.0,2.0\n"


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("2\n1,0 0,0\n1,0\n", 3, None),
        ("2\n1,0 0,0\n1,0 x,1\n", 3, 5),
        ("2\n1,0 0,0,1\n1,0 0,0\n", 2, 5),
        ("two\n", 1, 1),
        ("2\n1,0 0,0\n", 2, None),
        ("", 1, None),
        ("1\nnan,0\n", 2, 1),
    ],
)
def test_parse_errors_carry_position(text, line, column):
    with pytest.raises(MatrixParseError) as info:
        parse_matrix(text)
    assert info.value.line == line
    if column is not None:
        assert info.value.column == column
        assert f"line {line}, column {column}" in str(info.value)
