from fractions import Fraction

from hypothesis import strategies as st

from minprod.spectrum import make_spectrum


@st.composite
def rationals(draw, lo=-20, hi=20, max_den=4):
    return Fraction(draw(st.integers(lo * max_den, hi * max_den)), draw(st.integers(1, max_den)))


@st.composite
def spectra(draw, max_entries=8, lo=-20, hi=20):
    """Finite truncated spectra with a finite bound at or above every entry."""
    values = draw(st.lists(rationals(lo, hi), min_size=1, max_size=max_entries, unique=True))
    pairs = [(v, draw(st.integers(1, 4))) for v in values]
    slack = draw(rationals(0, 3))
    return make_spectrum(pairs, max(values) + slack)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
