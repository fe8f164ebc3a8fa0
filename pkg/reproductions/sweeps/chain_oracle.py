from burgesspy.experiments import (
    ExperimentConfig,
    emit_report,
    raise_for_hard_failures,
    run_chain_check,
)

# small moduli where the sextuple count is cross-checked by brute force
config = ExperimentConfig(moduli_family='primes',
                          q_range=(150, 500),
                          n_moduli=6,
                          characters_per_q=3,
                          r=2,
                          J=3,
                          oracle=True,
                          seed=1)

rows = run_chain_check(config, show_progress=True)
emit_report(rows, 'json', 'chain_oracle.json')

raise_for_hard_failures(rows)
