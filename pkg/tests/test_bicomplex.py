"""Tests for bicomplexes, the ddbar-lemma and Bott-Chern cohomology."""

import random

import pytest
from sympy.polys.domains import QQ_I

from rht.bicomplex import Bicomplex, bott_chern, ddbar_check, ddbar_failures
from rht.dsl import load_file
from rht.errors import BicomplexError
from rht.gca import FreeCDGA, Generator


def _random_bicomplex(rng: random.Random):
    """Direct sum of dots, squares and single arrows placed at random bidegrees."""
    components, del_images, delbar_images = {}, {}, {}
    arrows = 0
    for b in range(rng.randint(1, 5)):
        p, q = rng.randint(0, 2), rng.randint(0, 2)
        shape = rng.choice(['dot', 'square', 'del', 'delbar'])
        if shape == 'dot':
            components.setdefault((p, q), []).append(f"d{b}")
        elif shape == 'square':
            s00, s10, s01, s11 = (f"s{b}_{k}" for k in ('00', '10', '01', '11'))
            components.setdefault((p, q), []).append(s00)
            components.setdefault((p + 1, q), []).append(s10)
            components.setdefault((p, q + 1), []).append(s01)
            components.setdefault((p + 1, q + 1), []).append(s11)
            del_images[s00] = {s10: 1}
            delbar_images[s00] = {s01: 1}
            del_images[s01] = {s11: 1}
            delbar_images[s10] = {s11: -1}
        else:
            arrows += 1
            head = (p + 1, q) if shape == 'del' else (p, q + 1)
            components.setdefault((p, q), []).append(f"t{b}")
            components.setdefault(head, []).append(f"h{b}")
            (del_images if shape == 'del' else delbar_images)[f"t{b}"] = {f"h{b}": 1}
    return Bicomplex('random', components, del_images, delbar_images), arrows


def test_ddbar_counterexample(corpus):
    """Test the square with a zigzag fails the ddbar-lemma in degree 1."""
    b = load_file(corpus / 'ddbar.bic')['square']
    assert ddbar_failures(b) == [1]
    assert not ddbar_check(b)
    bc = bott_chern(b)
    assert bc.dims[(1, 0)] == 1
    assert bc.betti[1] == 0
    assert not bc.natural_map_iso


def test_torus_satisfies_ddbar(corpus):
    """Test the Dolbeault model of the complex torus satisfies the ddbar-lemma."""
    b = Bicomplex.from_cdga(load_file(corpus / 'torus.cdga')['torus'])
    assert b.component_dims() == {(0, 0): 1, (0, 1): 1, (1, 0): 1, (1, 1): 1}
    assert ddbar_check(b)
    bc = bott_chern(b)
    assert bc.natural_map_iso
    assert bc.total_dims == {0: 1, 1: 2, 2: 1}
    assert bc.betti == {0: 1, 1: 2, 2: 1}


@pytest.mark.parametrize('seed', range(100))
def test_ddbar_iff_bott_chern_iso(seed):
    """Test the ddbar-lemma holds exactly when Bott-Chern maps isomorphically to d-cohomology."""
    b, arrows = _random_bicomplex(random.Random(seed))
    holds = ddbar_check(b)
    assert holds is (arrows == 0)
    assert bott_chern(b).natural_map_iso is holds


def test_bicomplex_rejects_bad_types():
    """Test del must raise p by one."""
    with pytest.raises(BicomplexError):
        Bicomplex('bad', {(0, 0): ['u'], (0, 1): ['v']}, {'u': {'v': 1}}, {})
    with pytest.raises(BicomplexError):
        Bicomplex('bad', {(0, 0): ['u'], (1, 0): ['u']}, {}, {})


def test_bicomplex_rejects_nonzero_square():
    """Test del delbar + delbar del must vanish."""
    with pytest.raises(BicomplexError):
        Bicomplex(
            'bad',
            {(0, 0): ['u'], (1, 0): ['a'], (0, 1): ['b'], (1, 1): ['w']},
            {'u': {'a': 1}, 'b': {'w': 1}},
            {'u': {'b': 1}, 'a': {'w': 1}},
        )


def test_from_cdga_needs_bidegrees():
    """Test generators without bidegrees cannot be split."""
    cdga = FreeCDGA([Generator(0, 'z', 1)], None, None, QQ_I)
    with pytest.raises(BicomplexError):
        Bicomplex.from_cdga(cdga)
