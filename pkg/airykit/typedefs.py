from collections.abc import Callable

import numpy as np
import numpy.typing as npt

FloatArray = npt.NDArray[np.float64]
ComplexArray = npt.NDArray[np.complex128]

# Vectorized integrand: receives an array of (possibly complex) nodes.
ArrayFunction = Callable[[npt.NDArray[np.generic]], npt.NDArray[np.generic]]
