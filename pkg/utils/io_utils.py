import os

import numpy as np
import pandas as pd
import torch


def path_to_step_output(output_dir, *sub_dirs):
    """
    Defines the path where the outputs will be saved on the disk, and creates it
    Args:
        output_dir (str): may be common to other experiments
        sub_dirs (str): optional nested directories inside output_dir

    Returns:
        str: path to the output of the step
    """
    checkpoint_dir = os.path.join(output_dir, *sub_dirs)

    if not os.path.isdir(checkpoint_dir):
        os.makedirs(checkpoint_dir)
    return checkpoint_dir


def set_and_print_random_seed(random_seed, save=False, checkpoint_dir='./'):
    """
    Set and print torch random seed, for reproducibility of the training.
    Numpy draws never rely on the global state: callers build their own generator with get_rng.
    Args:
        random_seed (int): seed for random instantiations ; if none is provided, a seed is randomly defined
        save (bool): if True, the random seed is saved in seed.txt
        checkpoint_dir (str): output folder where the seed is saved
    Returns:
        int: random seed

    """
    if random_seed is None:
        random_seed = np.random.randint(0, 2 ** 32 - 1)
    random_seed = int(random_seed)
    torch.manual_seed(random_seed)
    prompt = 'Random seed : {}\n'.format(random_seed)
    print(prompt)

    if save:
        with open(os.path.join(checkpoint_dir, 'seed.txt'), 'w') as f:
            f.write(prompt)

    return random_seed


def get_rng(random_seed):
    """
    Args:
        random_seed (int or numpy.random.Generator): seed, or an already built generator which is returned as is

    Returns:
        numpy.random.Generator: generator owned by one run
    """
    return np.random.default_rng(random_seed)


def write_frame(frame, path):
    """
    Writes a DataFrame as CSV with full float precision and LF line endings
    Args:
        frame (pandas.DataFrame): table to write
        path (str): output file
    """
    dirname = os.path.dirname(path)
    if dirname and not os.path.isdir(dirname):
        os.makedirs(dirname)
    frame.to_csv(path, index=False, lineterminator='\n')


def read_frame(path):
    """
    Args:
        path (str): CSV file written by write_frame

    Returns:
        pandas.DataFrame: table with floats parsed back bit-exactly
    """
    return pd.read_csv(path, float_precision='round_trip')
