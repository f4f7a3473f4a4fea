"""evguard: EV charging-station security toolkit.

Simulates priority-based charging coordination, trains a stealthy
SoC-falsification attack agent against it, and trains a PPO-based intrusion
detector on the resulting datasets.
"""

__version__ = "0.1.0"
