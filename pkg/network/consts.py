SBS_USER = "sbs-user"
USER_USER = "user-user"
SBS_SBS = "sbs-sbs"
LINK_KINDS = (SBS_USER, USER_USER, SBS_SBS)

UL = "UL"
DL = "DL"
DIRECTIONS = (UL, DL)

HD_OMA_UL = "HD-OMA-UL"
HD_OMA_DL = "HD-OMA-DL"
HD_NOMA_UL = "HD-NOMA-UL"
HD_NOMA_DL = "HD-NOMA-DL"
FD_OMA = "FD-OMA"
IDLE = "idle"
MODES = (HD_OMA_UL, HD_OMA_DL, HD_NOMA_UL, HD_NOMA_DL, FD_OMA, IDLE)

# Report categories: both HD-OMA directions are tallied together.
TALLY_HD_OMA = "HD-OMA"
TALLY_FD = "FD"
TALLY_UL_NOMA = "UL-NOMA"
TALLY_DL_NOMA = "DL-NOMA"
TALLY_IDLE = "idle"
ACTIVE_TALLIES = (TALLY_HD_OMA, TALLY_FD, TALLY_UL_NOMA, TALLY_DL_NOMA)

MODE_TALLY = {
    HD_OMA_UL: TALLY_HD_OMA,
    HD_OMA_DL: TALLY_HD_OMA,
    FD_OMA: TALLY_FD,
    HD_NOMA_UL: TALLY_UL_NOMA,
    HD_NOMA_DL: TALLY_DL_NOMA,
    IDLE: TALLY_IDLE,
}

# 3GPP multi-cell pico outdoor set: PL(dB) = intercept + slope * log10(d / 1 km).
# Implementation choice, overridable per scenario.
DEFAULT_PATHLOSS = {
    SBS_USER: (140.7, 36.7),
    USER_USER: (145.4, 37.5),
    SBS_SBS: (169.36, 41.1),
}

MIN_DISTANCE_M = 1.0

SCHEME_PROPOSED = "proposed"
SCHEME_HD_OMA = "hd-oma"
SCHEME_HD_NOMA = "hd-noma"
SCHEME_FD_OMA = "fd-oma"
SCHEME_UNCOORDINATED = "uncoordinated"
SCHEMES = (SCHEME_PROPOSED, SCHEME_HD_OMA, SCHEME_HD_NOMA, SCHEME_FD_OMA, SCHEME_UNCOORDINATED)
MATCHING_SCHEMES = (SCHEME_PROPOSED, SCHEME_UNCOORDINATED)
