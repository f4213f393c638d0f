SECTOR_LABELS = {
    'b': 'bosonic', 'f': 'fermionic',
}


COLORS = [
    'blue', 'green', 'salmon', 'gray',
]


MARKERS = ['o', 's', '^']


AIRY_COLOR = 'tab:gray'
