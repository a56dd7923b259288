# Doctests were written against numpy < 2 scalar reprs (``True`` rather than
# ``np.True_``); print numpy scalars the legacy way while collecting them.
import matplotlib
import numpy as np

matplotlib.use('Agg')
np.set_printoptions(legacy='1.25')
