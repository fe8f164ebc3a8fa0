from burgesspy.experiments import (
    ExperimentConfig,
    emit_report,
    fit_exponent,
    run_theorem_check,
    theorem_exponent,
)
from burgesspy.logger import BurgessLogger

ALPHA = 0.55

# H = q^{1/(2r) + 0.3} over prime moduli
config = ExperimentConfig(moduli_family='primes',
                          q_range=(1000, 1000000),
                          n_moduli=10,
                          characters_per_q=2,
                          r=2,
                          H_rule='q^{1/(2r)+0.3}',
                          J=3,
                          seed=0)

logger = BurgessLogger('theorem_primes', tensorboard=True)
logger.add_params(config.get_params())

rows = run_theorem_check(config, logger=logger, show_progress=True)
logger.close()

emit_report(rows, 'csv', 'theorem_primes.csv')

slope, _ = fit_exponent(rows, 'lhs')
print('fitted exponent  : ', slope)
print('theorem exponent : ', theorem_exponent(config.r, ALPHA))
