"""One-minute smoke experiment: single-mode BPSK decoder vs Kennedy optimum.

Trains the 2-parameter single-mode receiver (phase + displacement) at three
energies and prints the gap to the closed-form displacement-nulling optimum.
"""

import numpy as np

from jdrlab import benchmarks, codes, training


def main() -> None:
    for energy in (0.1, 0.2, 0.4):
        pair = codes.Codebook(1, 2, energy, "random",
                              np.array([[0], [1]], dtype=np.uint8))
        config = training.TrainConfig(seed=7, n_restarts=4, max_iters=400)
        run = training.train(pair, config)
        target, beta = benchmarks.kennedy_success(energy)
        print(f"E={energy:.2f}: trained p_succ={run.p_succ:.6f}  "
              f"kennedy optimum={target:.6f} (beta={beta:.4f})  "
              f"gap={target - run.p_succ:+.2e}  "
              f"iters={len(run.loss_history)}  wall={run.wall_time:.2f}s")


if __name__ == "__main__":
    main()
