from .dataset import (
    LEADING_COLUMNS,
    ROLES,
    TEST,
    TRAINING,
    Dataset,
    DatasetRow,
    flow_columns,
    read_dataset,
    write_dataset,
    write_rounded,
)
