'''
Output locations, resolved relative to the `results/` directory of this checkout.
'''
from os.path import abspath, dirname, join

RESULTS_PATH = dirname(dirname(dirname(abspath(__file__))))
FIG_PATH = join(RESULTS_PATH, 'figures')
DATA_PATH = join(RESULTS_PATH, 'data')
TABLE_FILE = 'spectral_table.lzma'
