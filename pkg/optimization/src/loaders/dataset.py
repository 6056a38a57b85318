import warnings
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from utils.errors import DatasetSchemaError
from utils.io_utils import read_frame, write_frame

TRAINING = 'training'
TEST = 'test'
ROLES = [TRAINING, TEST]

LEADING_COLUMNS = ['load', 'delay_msec', 'mlu', 'generations']


def flow_columns(n_links):
    return ['f{}'.format(link) for link in range(1, n_links + 1)]


@dataclass(frozen=True)
class DatasetRow:
    load_kbps: float
    delay_msec: float
    mlu: float
    generations: int
    flows: tuple

    def __post_init__(self):
        object.__setattr__(self, 'flows', tuple(float(flow) for flow in self.flows))


@dataclass
class Dataset:
    """
    Optimal flow distributions for increasing total loads. n_links is taken from the rows when not given,
    and keeps the flow columns of an empty dataset.
    """
    rows: list
    role: str = TRAINING
    flagged_loads: list = field(default_factory=list)
    n_links: int = None

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValueError('Unknown dataset role {}'.format(self.role))
        loads = [row.load_kbps for row in self.rows]
        if any(later <= earlier for earlier, later in zip(loads, loads[1:])):
            raise ValueError('dataset loads must be strictly increasing')
        if len({len(row.flows) for row in self.rows}) > 1:
            raise ValueError('all dataset rows must have the same number of links')
        if self.n_links is None:
            self.n_links = len(self.rows[0].flows) if self.rows else 0
        elif self.rows and len(self.rows[0].flows) != self.n_links:
            raise ValueError('dataset rows must have n_links flows')

    def __len__(self):
        return len(self.rows)

    @property
    def loads(self):
        return np.array([row.load_kbps for row in self.rows], dtype=float)

    @property
    def flows(self):
        """
        Returns:
            numpy.ndarray: shape (n_rows, n_links)
        """
        return np.array([row.flows for row in self.rows], dtype=float).reshape(len(self.rows), self.n_links)

    def to_frame(self):
        return pd.DataFrame(
            [[row.load_kbps, row.delay_msec, row.mlu, row.generations] + list(row.flows) for row in self.rows],
            columns=LEADING_COLUMNS + flow_columns(self.n_links),
        )


def write_dataset(dataset, path):
    """
    Writes the dataset as CSV, header load,delay_msec,mlu,generations,f1,...,fN with full precision
    Args:
        dataset (Dataset): dataset to write
        path (str): output file
    """
    write_frame(dataset.to_frame(), path)


def write_rounded(dataset, path):
    """
    Writes the dataset in report rounding: delay to 0.1 msec, M.L.U to 4 decimals,
    flows to whole kbps
    Args:
        dataset (Dataset): dataset to write
        path (str): output file
    """
    frame = dataset.to_frame()
    frame['load'] = frame['load'].round().astype(int)
    frame['delay_msec'] = frame['delay_msec'].round(1)
    frame['mlu'] = frame['mlu'].round(4)
    for column in flow_columns(len(frame.columns) - len(LEADING_COLUMNS)):
        frame[column] = frame[column].round().astype(int)
    write_frame(frame, path)


def read_dataset(path, role=TRAINING):
    """
    Args:
        path (str): CSV file written by write_dataset
        role (str): training or test

    Returns:
        Dataset: rows of the file
    """
    try:
        frame = read_frame(path)
    except pd.errors.EmptyDataError:
        raise DatasetSchemaError('{} is empty, a header is required'.format(path))
    except pd.errors.ParserError as error:
        raise DatasetSchemaError('malformed CSV {path}: {error}'.format(path=path, error=error))

    columns = list(frame.columns)
    n_links = len(columns) - len(LEADING_COLUMNS)
    if n_links < 1 or columns != LEADING_COLUMNS + flow_columns(n_links):
        raise DatasetSchemaError(
            'unexpected header {columns} in {path}, expected {expected}'.format(
                columns=','.join(columns),
                path=path,
                expected=','.join(LEADING_COLUMNS + ['f1', '...', 'fN']),
            )
        )
    if frame.isnull().values.any():
        raise DatasetSchemaError('missing values in {}'.format(path))

    if len(frame) == 0:
        warnings.warn('dataset {} has no rows'.format(path))

    try:
        rows = [
            DatasetRow(
                load_kbps=float(record[0]),
                delay_msec=float(record[1]),
                mlu=float(record[2]),
                generations=int(record[3]),
                flows=tuple(float(value) for value in record[len(LEADING_COLUMNS):]),
            )
            for record in frame.itertuples(index=False, name=None)
        ]
        return Dataset(rows=rows, role=role, n_links=n_links)
    except (TypeError, ValueError) as error:
        raise DatasetSchemaError('invalid values in {path}: {error}'.format(path=path, error=error))
