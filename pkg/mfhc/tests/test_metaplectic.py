"""Arithmetic in the metaplectic double cover."""

import cmath
import math
import random
from fractions import Fraction

import pytest

from mfhc.errors import DomainError, ParseError, SignDomainError
from mfhc.services import metaplectic
from mfhc.services.metaplectic import MetaplecticElement
from mfhc.services.verify import random_element, scaled_tol


def test_k_two_pi_is_central_minus_one() -> None:
    """k(2π) = (I, −1) and k(4π) = id."""
    assert metaplectic.is_close(metaplectic.k_elem(2 * math.pi), metaplectic.central_minus_one())
    assert not metaplectic.is_close(metaplectic.k_elem(2 * math.pi), metaplectic.identity())
    assert metaplectic.is_close(metaplectic.k_elem(4 * math.pi), metaplectic.identity())


def test_z_has_order_four() -> None:
    """Z = k(π) lies over −I with Z² = (I, −1) and Z⁴ = id."""
    z = metaplectic.k_elem(math.pi)
    (a, b), (c, d) = metaplectic.project(z)
    assert max(abs(a + 1), abs(b), abs(c), abs(d + 1)) < 1e-12
    z2 = metaplectic.multiply(z, z)
    assert metaplectic.is_close(z2, metaplectic.central_minus_one())
    assert not metaplectic.is_close(z2, metaplectic.identity())
    assert metaplectic.is_close(metaplectic.multiply(z2, z2), metaplectic.identity())


def test_exact_translation_product() -> None:
    """n(1)·n(1/2) = n(3/2) with exact entries."""
    x = metaplectic.multiply(metaplectic.n_elem(1), metaplectic.n_elem(Fraction(1, 2)))
    assert x == metaplectic.n_elem(Fraction(3, 2))


def test_cocycle_value_matches_definition() -> None:
    """ω of a product is ω_x(g_y τ)·ω_y(τ) at an arbitrary τ."""
    rng = random.Random(11)
    for _ in range(20):
        x, y = random_element(rng), random_element(rng)
        xy = metaplectic.multiply(x, y)
        tau = complex(rng.uniform(-1, 1), rng.uniform(0.5, 2))
        expected = metaplectic.omega(x, metaplectic.act(y, tau)) * metaplectic.omega(y, tau)
        assert cmath.isclose(metaplectic.omega(xy, tau), expected, rel_tol=1e-9)


def test_inverse() -> None:
    """x·x⁻¹ = id."""
    rng = random.Random(12)
    for _ in range(20):
        x = random_element(rng)
        prod = metaplectic.multiply(x, metaplectic.inverse(x))
        assert metaplectic.is_close(prod, metaplectic.identity(), 1e-9)


def test_associativity_on_random_triples() -> None:
    """(xy)z = x(yz) including the sign."""
    rng = random.Random(13)
    for _ in range(1000):
        x, y, z = (random_element(rng) for _ in range(3))
        left = metaplectic.multiply(metaplectic.multiply(x, y), z)
        right = metaplectic.multiply(x, metaplectic.multiply(y, z))
        assert metaplectic.is_close(left, right, scaled_tol(left, right))


def test_nmk_roundtrip() -> None:
    """n(b)m(a, 1)k(θ) recomposes to the element."""
    rng = random.Random(14)
    for _ in range(50):
        x = random_element(rng)
        b, a, theta = metaplectic.nmk_parameters(x)
        assert a > 0 and 0 <= theta < 4 * math.pi
        assert metaplectic.is_close(metaplectic.compose(*metaplectic.nmk_decompose(x)), x, 1e-9)


def test_m_elem_sign_domains() -> None:
    """a > 0 takes ±1 and a < 0 takes ±i."""
    assert metaplectic.m_elem(-1, 1j).branch == 1
    assert metaplectic.m_elem(-1, -1j).branch == -1
    assert metaplectic.m_elem(2, -1).branch == -1
    with pytest.raises(SignDomainError):
        metaplectic.m_elem(-1, 1)
    with pytest.raises(SignDomainError):
        metaplectic.m_elem(2, 1j)
    with pytest.raises(DomainError):
        metaplectic.m_elem(0, 1)


def test_determinant_is_checked() -> None:
    """Only SL₂ matrices lift."""
    with pytest.raises(DomainError):
        MetaplecticElement(1, 1, 1, 1)
    with pytest.raises(ValueError):
        MetaplecticElement(1, 0, 0, 1, 2)


@pytest.mark.parametrize(
    "text,expected",
    [
        ("id", metaplectic.identity()),
        ("n:2", metaplectic.n_elem(2)),
        ("n:1/2", metaplectic.n_elem(Fraction(1, 2))),
        ("m:2:+1", metaplectic.m_elem(2, 1)),
        ("m:-1:-i", metaplectic.m_elem(-1, -1j)),
    ],
)
def test_parse_element(text: str, expected: MetaplecticElement) -> None:
    """Short textual forms used on the command line."""
    assert metaplectic.parse_element(text) == expected


@pytest.mark.parametrize("text", ["", "z:1", "k:abc", "m:2:x", "n:1:2", "m:-1:+1"])
def test_parse_element_rejects_malformed(text: str) -> None:
    """Bad syntax and bad signs are parse or domain errors."""
    with pytest.raises((ParseError, SignDomainError)):
        metaplectic.parse_element(text)
