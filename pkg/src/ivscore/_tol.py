# Shared numerical tolerances.

TAU_CMP = 1e-9      # set membership / equality of probabilities and lengths
TAU_MASS = 1e-9     # normalization of probability vectors
TAU_LEN = 1e-6      # shrink step used when probing minimality of shortest intervals
TAU_ARGMIN = 1e-9   # ties among brute-force minimizers
FAIL_GAP = 1e-6     # smallest expected-score gap accepted as a genuine inconsistency
