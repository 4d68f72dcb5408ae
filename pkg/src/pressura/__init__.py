"""Digital evolution of self-replicating programs on a virtual CPU.

Modules: ``isa`` (instructions, genomes), ``cpu`` (single-organism execution),
``environment`` (logic tasks), ``population`` (scheduling and births),
``analysis`` (test-CPU fitness, neutrality, fidelity formulas) and
``experiments`` (presets, runner, plots, CLI).
"""

__version__ = "0.1.0"
