"""Cumulative regret of each agent on a short RiverSwim experiment.

    python demos/compare_agents.py [runs] [episodes]
"""
import sys
import time

from plauset import AgentSpec, DomainSpec, run_experiment


def main(runs=10, episodes=40):
    agents = [AgentSpec(k) for k in ("oracle", "psrl", "ofvf", "bayesucrl", "hoeffding")]
    start = time.perf_counter()
    result = run_experiment(DomainSpec("riverswim"), agents, episodes=episodes, runs=runs, seed=0)
    print(f"RiverSwim, {runs} runs x {episodes} episodes ({time.perf_counter() - start:.0f}s)")
    print(f"{'agent':<10} {'mean':>9} {'worst':>9}")
    for spec in agents:
        mean, worst = result.final(spec.name)
        print(f"{spec.name:<10} {mean:9.3f} {worst:9.3f}")


if __name__ == "__main__":
    main(*map(int, sys.argv[1:3]))
