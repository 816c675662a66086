"""How long does a rate-1/2 code survive blind reconstruction?

An eavesdropper with 10^4 intercepted bits tries every generator pair of
memory at most 6 and keeps those whose syndrome is nearly all zero.  A
little channel noise is enough to bury the true pair among the rest.
"""

from perseus.analysis import DEMO_NOISE_LEVELS, attack_sweep, format_record

for rec in attack_sweep(DEMO_NOISE_LEVELS, trials=50, seed=0):
    print(format_record(rec))
