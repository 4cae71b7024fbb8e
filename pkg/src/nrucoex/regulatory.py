"""ETSI band constants, LBT category selection and the LBR handshake overhead."""

from dataclasses import dataclass, field
from enum import Enum


class UnknownBand(ValueError):
    pass


class UnknownScs(ValueError):
    pass


class InvalidBandwidth(ValueError):
    pass


class Band(Enum):
    BAND_5GHZ = "5GHz"
    BAND_60GHZ = "60GHz"


class LbtCategory(Enum):
    CAT1 = 1
    CAT2 = 2
    CAT4 = 4


@dataclass(frozen=True)
class BandRules:
    band: Band
    cca_slot_us: float
    mcot_ms: float
    ed_reference_dbm: float
    ed_reference_condition: str
    max_eirp_dbm: float
    max_psd_dbm_per_mhz: float
    ocb_min_fraction: float
    ocb_max_fraction: float
    # Priority-class MCOT values; a single entry where the band has one MCOT.
    mcot_classes_ms: tuple = ()
    # (EIRP dBm, PSD dBm/MHz) per sub-band where the band splits its limits.
    sub_band_limits: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0 < self.ocb_min_fraction <= self.ocb_max_fraction <= 1:
            raise ValueError("OCB fractions must satisfy 0 < min <= max <= 1")
        if self.cca_slot_us <= 0 or self.mcot_ms <= 0:
            raise ValueError("durations must be positive")


_RULES = {
    Band.BAND_60GHZ: BandRules(
        band=Band.BAND_60GHZ,
        cca_slot_us=5.0,
        mcot_ms=9.0,
        ed_reference_dbm=-47.0,
        ed_reference_condition="40 dBm radiated power",
        max_eirp_dbm=40.0,
        max_psd_dbm_per_mhz=13.0,
        ocb_min_fraction=0.80,
        ocb_max_fraction=1.00,
        mcot_classes_ms=(9.0,),
    ),
    Band.BAND_5GHZ: BandRules(
        band=Band.BAND_5GHZ,
        cca_slot_us=9.0,
        mcot_ms=10.0,
        ed_reference_dbm=-72.0,
        ed_reference_condition="20 MHz channel bandwidth",
        max_eirp_dbm=23.0,
        max_psd_dbm_per_mhz=10.0,
        ocb_min_fraction=0.70,
        ocb_max_fraction=1.00,
        mcot_classes_ms=(2.0, 4.0, 6.0, 8.0, 10.0),
        sub_band_limits={
            "5.15-5.35GHz": (23.0, 10.0),
            "5.47-5.725GHz": (30.0, 17.0),
        },
    ),
}

# Fraction of the 9 ms MCOT spent on one LBR handshake slot, in the usual
# four-decimal form (truncated, not rounded).
LBR_OVERHEAD = {
    15: 0.1111,
    30: 0.0555,
    60: 0.0277,
    120: 0.0138,
    240: 0.0069,
}

# Extended CCA in the 60 GHz band lasts 8 + m * 5 us, m being the backoff
# draw. Kept for reference only; backoff is not simulated.
EXTENDED_CCA_60GHZ_US = (8.0, 5.0)


def _as_band(band):
    if isinstance(band, Band):
        return band
    try:
        return Band(band)
    except ValueError:
        pass
    try:
        return Band[str(band)]
    except KeyError:
        raise UnknownBand(f"unknown band: {band!r}") from None


def band_rules(band):
    """Regulatory constants for ``band`` (a :class:`Band` or its name/value)."""
    return _RULES[_as_band(band)]


def lbr_overhead(scs_khz):
    try:
        return LBR_OVERHEAD[int(scs_khz)]
    except (KeyError, ValueError, TypeError):
        raise UnknownScs(f"no LBR overhead for SCS {scs_khz!r} kHz") from None


def slot_duration_ms(scs_khz):
    return 1.0 / (scs_khz / 15.0)


def cot_gap_category(gap_us):
    """LBT category a responding device needs inside a shared COT.

    Gaps below 16 us need no sensing, 16..25 us (both ends inclusive) a
    single short sensing, anything longer a full Cat 4 LBT.
    """
    if gap_us < 0:
        raise ValueError("gap must be non-negative")
    if gap_us < 16.0:
        return LbtCategory.CAT1
    if gap_us <= 25.0:
        return LbtCategory.CAT2
    return LbtCategory.CAT4


def check_mcot(duration_ms, band, mcot_class_ms=None):
    """True iff a COT of ``duration_ms`` respects the band's MCOT.

    In the 5 GHz band the limit depends on the priority class; pass it as
    ``mcot_class_ms``. Without it the longest permitted class applies.
    """
    if duration_ms < 0:
        raise ValueError("duration must be non-negative")
    rules = band_rules(band)
    limit = rules.mcot_ms
    if mcot_class_ms is not None:
        if mcot_class_ms not in rules.mcot_classes_ms:
            raise ValueError(
                f"{mcot_class_ms} ms is not an MCOT class of {rules.band.value}"
            )
        limit = mcot_class_ms
    return duration_ms <= limit


def check_ocb(occupied_hz, nominal_hz, band):
    if nominal_hz <= 0 or occupied_hz <= 0 or occupied_hz > nominal_hz:
        raise InvalidBandwidth(
            f"need 0 < occupied <= nominal, got {occupied_hz} / {nominal_hz}"
        )
    rules = band_rules(band)
    ratio = occupied_hz / nominal_hz
    return rules.ocb_min_fraction <= ratio <= rules.ocb_max_fraction
