from burgesspy.experiments import (
    ExperimentConfig,
    burgess_exponent,
    emit_report,
    fit_exponent,
    run_theorem_check,
)

ALPHA = 0.45

# Legendre symbols of prime moduli, H = q^{0.45}
config = ExperimentConfig(moduli_family='primes',
                          q_range=(10000, 3000000),
                          n_moduli=12,
                          character_kind='quadratic',
                          r=2,
                          H_rule='q^{0.45}',
                          J=8,
                          seed=0)

rows = run_theorem_check(config, show_progress=True)
emit_report(rows, 'csv', 'quadratic_large_values.csv')

for row in rows:
    print(row.q, [flag for flag in row.flags if flag.startswith('large')])

slope, _ = fit_exponent(rows, 'normalized_max')
print('normalized maximal sum exponent : ', slope)
print('classical bound exponent        : ', burgess_exponent(config.r, ALPHA))
