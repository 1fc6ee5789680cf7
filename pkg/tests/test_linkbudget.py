import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tables import TABLES
from photonlink.linkbudget import (
    BackgroundBreakdown,
    LinkScenario,
    background_breakdown,
    dpsk_background_per_bit,
    dpsk_channel,
    effective_counts,
    noise_photon_rate,
    solid_angle,
)

BASE = LinkScenario()


class TestScenario:
    def test_defaults(self):
        assert BASE.spectral_radiance == 10.0
        assert BASE.data_rate == 311e6
        assert BASE.counter_efficiency == 0.7

    @pytest.mark.parametrize(
        "field,value",
        [
            ("spectral_radiance", -1.0),
            ("aperture_diameter", math.inf),
            ("counter_efficiency", 0.0),
            ("qswitch_efficiency", 1.5),
            ("amplifier_gain", 1.0),
            ("n_sp", 0.5),
            ("fov_full_angle", 200.0),
            ("polarization_filtered", 1),
        ],
    )
    def test_rejects_invalid(self, field, value):
        with pytest.raises(ValueError):
            BASE.replace(**{field: value})

    def test_idealized(self):
        ideal = BASE.idealized()
        assert ideal.counter_efficiency == 1.0
        assert ideal.n_sp == 1.0
        assert math.isinf(ideal.amplifier_gain)
        assert ideal.spectral_radiance == BASE.spectral_radiance


class TestSolidAngle:
    def test_zero(self):
        assert solid_angle(0.0) == 0.0

    def test_half_degree(self):
        assert solid_angle(0.5) == pytest.approx(59.8e-6, rel=2e-3)
        assert solid_angle(0.5) == pytest.approx(5.98113956160337e-5, rel=1e-13)

    def test_hemisphere(self):
        assert solid_angle(180.0) == pytest.approx(2 * math.pi, rel=1e-15)

    def test_full_sphere_form(self):
        theta = math.radians(30.0) / 2
        assert solid_angle(30.0) == pytest.approx(2 * math.pi * (1 - math.cos(theta)), rel=1e-14)

    @pytest.mark.parametrize("angle", [-0.1, 180.5])
    def test_rejects_out_of_range(self, angle):
        with pytest.raises(ValueError):
            solid_angle(angle)


class TestNoiseRate:
    def test_zero_radiance(self):
        assert noise_photon_rate(BASE.replace(spectral_radiance=0.0)) == 0.0

    def test_reference_rate(self):
        assert noise_photon_rate(BASE) == pytest.approx(2.93e9, rel=1e-2)
        assert noise_photon_rate(BASE) == pytest.approx(2927640388.553207, rel=1e-12)

    @pytest.mark.parametrize("c", [0.5, 0.1, 0.05, 0.01])
    def test_linear_in_radiance(self, c):
        scaled = noise_photon_rate(BASE.replace(spectral_radiance=10.0 * c))
        assert scaled == pytest.approx(c * noise_photon_rate(BASE), rel=1e-12)


class TestBreakdown:
    @pytest.mark.parametrize("radiance", sorted(TABLES))
    def test_matches_reference_table(self, radiance):
        rows = background_breakdown(BASE.replace(spectral_radiance=radiance))
        for row, (mod, msps, per_symbol, per_slot) in zip(rows, TABLES[radiance], strict=True):
            assert row.modulation == mod
            assert row.symbol_rate / 1e6 == pytest.approx(msps, rel=1e-3)
            assert row.photons_per_symbol_in_pol == pytest.approx(per_symbol, rel=1e-3)
            assert row.photons_per_slot == pytest.approx(per_slot, rel=1e-3)

    def test_row_identities(self):
        for row in background_breakdown(BASE, (2, 4, 8, 16, 32, 64, 128)):
            assert row.photons_per_slot * row.slots == row.photons_per_symbol_in_pol
            if row.modulation != "DPSK":
                bits = row.slots.bit_length() - 1
                assert row.symbol_rate * bits == pytest.approx(BASE.data_rate, rel=1e-15)

    @pytest.mark.parametrize("c", [0.5, 0.1, 0.05, 0.01])
    def test_linear_across_tables(self, c):
        ref = background_breakdown(BASE)
        scaled = background_breakdown(BASE.replace(spectral_radiance=10.0 * c))
        for a, b in zip(ref, scaled):
            assert b.photons_per_symbol_in_pol == pytest.approx(c * a.photons_per_symbol_in_pol, rel=1e-12)
            assert b.photons_per_slot == pytest.approx(c * a.photons_per_slot, rel=1e-12)

    def test_zero_radiance_rows(self):
        rows = background_breakdown(BASE.replace(spectral_radiance=0.0))
        assert all(r.photons_per_symbol_in_pol == 0.0 and r.photons_per_slot == 0.0 for r in rows)

    def test_unfiltered_polarization_doubles(self):
        a = background_breakdown(BASE)
        b = background_breakdown(BASE.replace(polarization_filtered=False))
        assert [r.photons_per_slot * 2 for r in a] == pytest.approx([r.photons_per_slot for r in b], rel=1e-15)

    def test_rejects_bad_order(self):
        with pytest.raises(ValueError):
            background_breakdown(BASE, (2, 6))

    def test_row_type(self):
        row = background_breakdown(BASE, (4,))[1]
        assert isinstance(row, BackgroundBreakdown) and row.slots == 4


class TestEffectiveCounts:
    def test_ideal_binary(self):
        sc = BASE.replace(counter_efficiency=1.0, spectral_radiance=0.0)
        assert effective_counts(sc, 20.0, 2) == (20.0, 0.0)

    def test_sixteen_ary_background(self):
        _, k_b = effective_counts(BASE, 10.0, 16)
        assert k_b == pytest.approx(1.176704356 * 0.7, rel=1e-3)

    def test_qswitch_halves_signal(self):
        full, kb_full = effective_counts(BASE, 12.0, 8)
        half, kb_half = effective_counts(BASE.replace(qswitch_efficiency=0.5), 12.0, 8)
        assert half == pytest.approx(full / 2, rel=1e-15)
        assert kb_half == kb_full

    def test_signal_scales_with_bits(self):
        k_s, _ = effective_counts(BASE, 5.0, 32)
        assert k_s == pytest.approx(5.0 * 5 * 0.7, rel=1e-15)

    @pytest.mark.parametrize("M", [2, 4, 8, 16, 32])
    @pytest.mark.parametrize("dark", [1e-3, 1.0, 10.0])
    def test_dark_counts_negligible(self, M, dark):
        _, base = effective_counts(BASE, 10.0, M)
        _, with_dark = effective_counts(BASE.replace(dark_count_rate=dark), 10.0, M)
        assert with_dark > base
        assert (with_dark - base) / base < 1e-6

    def test_dark_counts_alone(self):
        sc = BASE.replace(spectral_radiance=0.0, dark_count_rate=311e6)
        _, k_b = effective_counts(sc, 1.0, 4)
        # one dark count per bit, two bits per symbol, four slots
        assert k_b == pytest.approx(0.5, rel=1e-15)

    def test_rejects_negative_photons(self):
        with pytest.raises(ValueError):
            effective_counts(BASE, -1.0, 4)

    @settings(max_examples=50)
    @given(ppb=st.floats(0, 200), m_exp=st.integers(1, 7), eta=st.floats(0.01, 1.0))
    def test_nonnegative(self, ppb, m_exp, eta):
        k_s, k_b = effective_counts(BASE.replace(counter_efficiency=eta), ppb, 2**m_exp)
        assert k_s >= 0 and k_b >= 0


class TestDpskBackground:
    def test_matches_table_row(self):
        assert dpsk_background_per_bit(BASE) == pytest.approx(4.706817423, rel=1e-3)

    def test_channel_carries_scenario(self):
        ch = dpsk_channel(BASE, 30.0)
        assert ch.gain == 1e4 and ch.n_sp == 1.05
        assert ch.background_per_bit == dpsk_background_per_bit(BASE)

    def test_no_counter_efficiency(self):
        assert dpsk_background_per_bit(BASE.replace(counter_efficiency=0.2)) == dpsk_background_per_bit(BASE)
