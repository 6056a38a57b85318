import os

import pytest

from optimization.src.loaders import (
    TEST,
    TRAINING,
    Dataset,
    DatasetRow,
    read_dataset,
    write_dataset,
    write_rounded,
)
from utils.errors import DatasetSchemaError
from utils.io_utils import read_frame


def make_dataset(role=TRAINING):
    return Dataset(
        rows=[
            DatasetRow(load_kbps=10.0, delay_msec=1.0 / 3.0, mlu=0.1 + 0.2, generations=12, flows=(4.25, 5.75)),
            DatasetRow(load_kbps=20.5, delay_msec=2.718281828459045, mlu=0.4, generations=80, flows=(9.1, 11.4)),
        ],
        role=role,
    )


def write_text(tmp_path, text):
    path = os.path.join(str(tmp_path), 'dataset.csv')
    with open(path, 'w') as f:
        f.write(text)
    return path


class TestDataset:

    def test_loads_must_increase(self):
        rows = make_dataset().rows
        with pytest.raises(ValueError):
            Dataset(rows=[rows[1], rows[0]])

    def test_rows_must_share_link_count(self):
        rows = make_dataset().rows
        with pytest.raises(ValueError):
            Dataset(rows=[rows[0], DatasetRow(30.0, 1.0, 0.5, 3, (1.0, 2.0, 3.0))])

    def test_link_count_must_match_rows(self):
        with pytest.raises(ValueError):
            Dataset(rows=make_dataset().rows, n_links=3)

    def test_unknown_role_raises(self):
        with pytest.raises(ValueError):
            make_dataset(role='validation')

    def test_arrays(self):
        dataset = make_dataset()

        assert dataset.loads.tolist() == [10.0, 20.5]
        assert dataset.flows.shape == (2, 2)


class TestWriteAndReadDataset:

    @staticmethod
    @pytest.mark.parametrize('role', [TRAINING, TEST])
    def test_values_are_preserved(tmp_path, role):
        path = os.path.join(str(tmp_path), 'dataset.csv')
        dataset = make_dataset(role)

        write_dataset(dataset, path)

        assert read_dataset(path, role) == dataset

    def test_header(self, tmp_path):
        path = os.path.join(str(tmp_path), 'dataset.csv')

        write_dataset(make_dataset(), path)

        with open(path) as f:
            assert f.readline() == 'load,delay_msec,mlu,generations,f1,f2\n'

    def test_header_mismatch_raises(self, tmp_path):
        path = write_text(tmp_path, 'load,delay,mlu,generations,f1\n10,1,0.1,3,10\n')

        with pytest.raises(DatasetSchemaError):
            read_dataset(path)

    def test_missing_values_raise(self, tmp_path):
        path = write_text(tmp_path, 'load,delay_msec,mlu,generations,f1,f2\n10,1,0.1,3,10\n')

        with pytest.raises(DatasetSchemaError):
            read_dataset(path)

    def test_decreasing_loads_raise(self, tmp_path):
        path = write_text(tmp_path, 'load,delay_msec,mlu,generations,f1\n20,1,0.1,3,20\n10,1,0.1,3,10\n')

        with pytest.raises(DatasetSchemaError):
            read_dataset(path)

    def test_empty_file_raises(self, tmp_path):
        with pytest.raises(DatasetSchemaError):
            read_dataset(write_text(tmp_path, ''))

    def test_header_only_gives_empty_dataset_with_warning(self, tmp_path):
        path = write_text(tmp_path, 'load,delay_msec,mlu,generations,f1,f2\n')

        with pytest.warns(UserWarning):
            dataset = read_dataset(path)

        assert len(dataset) == 0
        assert dataset.n_links == 2

    def test_empty_dataset_keeps_its_flow_columns(self, tmp_path):
        path = os.path.join(str(tmp_path), 'empty.csv')
        write_dataset(Dataset(rows=[], n_links=13), path)

        with pytest.warns(UserWarning):
            dataset = read_dataset(path)

        assert len(dataset) == 0
        assert dataset.n_links == 13
        assert dataset.flows.shape == (0, 13)


class TestWriteRounded:

    def test_published_rounding(self, tmp_path):
        path = os.path.join(str(tmp_path), 'rounded.csv')

        write_rounded(make_dataset(), path)

        frame = read_frame(path)
        assert frame['load'].tolist() == [10, 20]
        assert frame['delay_msec'].tolist() == [0.3, 2.7]
        assert frame['mlu'].tolist() == [0.3, 0.4]
        assert frame['f1'].tolist() == [4, 9]
