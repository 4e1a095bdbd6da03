"""Reference AODV configurations."""

import numpy as np

# defaults of the AODV specification
RFC_DEFAULTS = np.array([1.0, 3.0, 6.0, 0.04, 10.0, 35, 2, 2, 1, 2, 7])
# compromise configurations found by the two tuned engines
TUNED_NSGA2 = np.array([10.46, 10.55, 20.42, 6.89, 41.13, 21, 6, 6, 7, 3, 19])
TUNED_SMPSO = np.array([3.94, 2.14, 8.06, 10.00, 40.62, 24, 1, 1, 19, 8, 5])

REFERENCE_CONFIGS = {
    "rfc": RFC_DEFAULTS,
    "pnsga2": TUNED_NSGA2,
    "psmpso": TUNED_SMPSO,
}
