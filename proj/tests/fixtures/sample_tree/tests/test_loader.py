from app.loader import ident


def test_ident():
    assert ident(1) == "1"
