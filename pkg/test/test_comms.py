"""
Tests for the SINR link model.

Covers the antenna gain (literal and closed form), the scalar link API and
the scene-level SINR matrix used by message propagation.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relay_bench.comms import (
    DIRECTIONAL,
    ISOTROPIC,
    AntennaModel,
    Link,
    array_gain,
    bearing_offset,
    can_communicate,
    closed_form_gain,
    directional,
    evaluate_link,
    link_sinr_matrix,
    sinr,
    steering_vector,
)
from relay_bench.errors import DomainError

angles = st.floats(min_value=-math.pi, max_value=math.pi, allow_nan=False)
coords = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False)


class TestAntenna:
    """Tests for steering vectors and array gain."""

    def test_isotropic_gain_is_one(self):
        """Isotropic gain is 1 in every direction."""
        for theta in np.linspace(-math.pi, math.pi, 13):
            assert array_gain(float(theta), ISOTROPIC) == pytest.approx(1.0)

    def test_directional_boresight_gain(self):
        """The two-element array peaks at 2 and nulls at broadside."""
        assert DIRECTIONAL.max_gain == pytest.approx(2.0)
        assert array_gain(math.pi / 2, DIRECTIONAL) == pytest.approx(0.0, abs=1e-12)

    def test_two_element_steering_vector(self):
        """Steering vector for L = 2 with a fractional weight."""
        theta = 0.4
        a = steering_vector(theta, AntennaModel(c_dir=0.7))
        expected = np.array([1.0, 0.7 * np.exp(1j * math.pi * math.sin(theta))])
        np.testing.assert_allclose(a, expected, rtol=0, atol=1e-15)

    @pytest.mark.parametrize("c_dir", [0.0, 0.25, 0.5, 0.7, 1.0])
    def test_fractional_directivity_gain(self, c_dir: float):
        """Boresight gain is 1 + c_dir and the broadside null fills in to 1 - c_dir."""
        antenna = AntennaModel(c_dir=c_dir)
        assert antenna.max_gain == pytest.approx(1.0 + c_dir, abs=1e-12)
        assert array_gain(math.pi / 2, antenna) == pytest.approx(1.0 - c_dir, abs=1e-12)

    @settings(max_examples=500)
    @given(theta=angles)
    def test_closed_form_matches_complex_gain(self, theta):
        """The closed form agrees with the complex gain."""
        assert abs(array_gain(theta, DIRECTIONAL) - closed_form_gain(theta)) <= 1e-12

    def test_more_elements_raise_boresight_gain(self):
        """Four elements reach a boresight gain of 4."""
        assert directional(4).max_gain == pytest.approx(4.0)

    def test_invalid_antenna(self):
        """Out-of-range c_dir and element counts are rejected."""
        with pytest.raises(ValueError):
            AntennaModel(c_dir=1.5)
        with pytest.raises(ValueError):
            AntennaModel(c_dir=1.0, elements=1)


class TestLink:
    """Tests for the scalar link API."""

    def test_unit_distance_reaches_threshold(self):
        """SINR is exactly 1 at unit distance."""
        link = Link((0.0, 0.0), (1.0, 0.0))
        assert sinr(link) == pytest.approx(1.0)
        assert can_communicate(link, 1.0)

    def test_just_beyond_range_fails(self):
        """A link just past r_com fails."""
        assert not can_communicate(Link((0.0, 0.0), (1.0 + 1e-9, 0.0)), 1.0)

    def test_jammer_interference(self):
        """Jamming divides by 1 + c_jam / d_j^2."""
        link = Link((0.0, 0.0), (0.5, 0.0), p_j=(0.5, 1.0), c_jam=3.0)
        assert sinr(link) == pytest.approx(1.0 / (0.25 * 4.0))

    def test_receiver_on_jammer(self):
        """A receiver on the jammer gets SINR 0."""
        result = evaluate_link(Link((0.0, 0.0), (0.5, 0.0), p_j=(0.5, 0.0), c_jam=3.0))
        assert result.sinr == 0.0
        assert result.jammer_coincident

    def test_jammer_ignored_without_coefficient(self):
        """c_jam = 0 disables interference."""
        link = Link((0.0, 0.0), (0.5, 0.0), p_j=(0.5, 0.0), c_jam=0.0)
        assert sinr(link) == pytest.approx(4.0)

    def test_directional_back_lobe(self):
        """Nothing is sent out of the back lobe."""
        link = Link((0.0, 0.0), (-1.0, 0.0), phi=0.0, antenna=DIRECTIONAL)
        assert sinr(link) == 0.0

    def test_directional_extends_range(self):
        """The directional array reaches past r_com."""
        link = Link((0.0, 0.0), (1.4, 0.0), phi=0.0, antenna=DIRECTIONAL)
        assert can_communicate(link, 1.0)
        assert not can_communicate(Link((0.0, 0.0), (1.4, 0.0)), 1.0)

    def test_coincident_link_rejected(self):
        """Transmitter and receiver may not coincide."""
        with pytest.raises(DomainError) as exc:
            Link((1.0, 1.0), (1.0, 1.0))
        assert exc.value.code == "COMMS_COINCIDENT"

    def test_nonpositive_threshold(self):
        """Test that a non-positive threshold is rejected."""
        with pytest.raises(DomainError):
            can_communicate(Link((0.0, 0.0), (1.0, 0.0)), 0.0)

    def test_bearing_offset_wraps(self):
        """Bearing offsets wrap into [-pi, pi)."""
        theta = bearing_offset((0.0, 0.0), (0.0, 1.0), -math.pi)
        assert -math.pi <= theta < math.pi
        assert theta == pytest.approx(-math.pi / 2)


class TestSinrMatrix:
    """Tests for the scene-level SINR matrix."""

    @settings(max_examples=200)
    @given(
        tx=st.lists(st.tuples(coords, coords, angles), min_size=1, max_size=4),
        rx=st.lists(st.tuples(coords, coords), min_size=1, max_size=4),
        jammer=st.tuples(coords, coords),
        c_dir=st.sampled_from([0.0, 0.5, 1.0]),
    )
    def test_matches_scalar_links(self, tx, rx, jammer, c_dir):
        """The scene matrix agrees with the scalar link API."""
        antenna = AntennaModel(c_dir=c_dir)
        tx_pos = np.array([(x, y) for x, y, _ in tx])
        tx_phi = np.array([phi for _, _, phi in tx])
        rx_pos = np.array(rx, dtype=float)
        matrix, _ = link_sinr_matrix(tx_pos, tx_phi, [antenna] * len(tx), rx_pos, np.array(jammer), 3.0)
        for i, (x, y, phi) in enumerate(tx):
            for j, p_r in enumerate(rx):
                if math.dist((x, y), p_r) < 1e-3 or math.dist(p_r, jammer) < 1e-3:
                    continue
                expected = sinr(Link((x, y), p_r, phi=phi, p_j=jammer, c_jam=3.0, antenna=antenna))
                assert matrix[i, j] == pytest.approx(expected, rel=1e-9, abs=1e-12)

    def test_coincident_pair_is_contact(self):
        """A coincident pair counts as contact."""
        matrix, n_jammed = link_sinr_matrix(
            np.array([[0.0, 0.0]]), np.zeros(1), [ISOTROPIC], np.array([[0.0, 0.0], [3.0, 0.0]])
        )
        assert matrix[0, 0] == math.inf
        assert matrix[0, 1] == pytest.approx(1.0 / 9.0)
        assert n_jammed == 0

    def test_receiver_on_jammer_is_cut_off(self):
        """A receiver on the jammer is cut off and counted."""
        matrix, n_jammed = link_sinr_matrix(
            np.array([[0.0, 0.0]]),
            np.zeros(1),
            [ISOTROPIC],
            np.array([[0.0, 0.0], [0.5, 0.0]]),
            jammer=np.array([0.5, 0.0]),
            c_jam=3.0,
        )
        assert matrix[0, 1] == 0.0
        assert n_jammed == 1
