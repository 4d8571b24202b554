"""Built-in demo systems used by the CLI and the test suite.

Three small positive systems exercising the three kinds of time scale the
library handles: a uniform integer grid, a spliced scale mixing isolated
points with a continuous interval, and an irregular purely discrete grid.
"""

from dataclasses import dataclass

import numpy as np

from .system import LinearSystem
from .timescale import TimeScale


@dataclass(frozen=True)
class DemoSystem:
    name: str
    description: str
    system: LinearSystem
    window: tuple


def demo_systems() -> dict:
    integer = LinearSystem(
        TimeScale.h_grid(1.0, 0.0, 2),
        A=np.array([[-1.0, 1.0], [1.0, 0.0]]),
        B=np.array([[1.0, 1.0], [0.0, 1.0]]),
    )
    hybrid = LinearSystem(
        TimeScale(((0.0, 0.0), (1.0, 2.0), (3.0, 3.0))),
        A=np.array([[-1.0, 0.0], [1.0, -1.0]]),
        B=np.array([[1.0], [0.0]]),
    )
    irregular = LinearSystem(
        TimeScale.points([0.0, 1.0, 2.0, 4.0]),
        A=np.array([[-0.5, 0.0], [1.0, -0.5]]),
        B=np.array([[1.0], [0.0]]),
    )
    return {
        "integer": DemoSystem(
            "integer",
            "two-input system on the integer grid {0, 1, 2}",
            integer,
            (0.0, 2.0),
        ),
        "hybrid": DemoSystem(
            "hybrid",
            "single-input system on the spliced scale {0} u [1, 2] u {3}",
            hybrid,
            (0.0, 3.0),
        ),
        "irregular": DemoSystem(
            "irregular",
            "single-input system on the irregular grid {0, 1, 2, 4}",
            irregular,
            (0.0, 4.0),
        ),
    }
