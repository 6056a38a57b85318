import sys

import click

from optimization.src.methods import COMPARED_METHODS, METHODS
from optimization.src.steps import DatasetGeneration, FlowOptimization, MethodComparison
from prediction.src.steps import FlowPrediction, PredictorEvaluation, PredictorTraining
from utils import configs
from utils.errors import FlowOptError, NonConvergenceError

EXIT_SUCCESS = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_NUMERICAL = 3

topology_option = click.option('--topology', default=configs.reference_topology, help='Path to the topology file')
seed_option = click.option(
    '--seed', type=int, default=None, envvar='FLOWOPT_SEED',
    help='Random seed, falls back to FLOWOPT_SEED then to a random seed',
)
out_option = click.option('--out', default=configs.save_dir, help='Output directory')
load_option = click.option('--load', type=float, default=None, help='Total load in kbps')
load_fraction_option = click.option(
    '--load-fraction', type=float, default=None, help='Total load as a fraction of the total capacity',
)
timings_option = click.option('--timings', is_flag=True, help='Also write wall-clock times (not reproducible)')
renormalize_option = click.option(
    '--renormalize', is_flag=True, help='Rescale predicted flows so that they sum to the load',
)


@click.group()
def cli():
    """
    Delay-minimizing flow assignment with evolutionary programming and particle swarms, and a neural
    predictor of the optimal flows.
    """


@cli.command()
@topology_option
@load_option
@load_fraction_option
@click.option('--method', type=click.Choice(METHODS), default='pso-chi')
@seed_option
@out_option
@timings_option
def optimize(topology, load, load_fraction, method, seed, out, timings):
    """
    Finds the best flow distribution of one total load with one method.
    """
    FlowOptimization(
        topology_path=topology,
        method=method,
        load=load,
        load_fraction=load_fraction,
        random_seed=seed,
        output_dir=out,
        timings=timings,
    ).apply()


@cli.command()
@topology_option
@load_option
@load_fraction_option
@click.option(
    '--method', 'methods', type=click.Choice(METHODS), multiple=True,
    help='Method to compare, may be repeated ; defaults to every metaheuristic',
)
@click.option('--trials', type=int, default=configs.n_trials)
@seed_option
@out_option
@timings_option
def compare(topology, load, load_fraction, methods, trials, seed, out, timings):
    """
    Runs seeded trials of several methods on one load and writes comparison.csv.
    """
    MethodComparison(
        topology_path=topology,
        load=load,
        load_fraction=load_fraction,
        methods=methods if methods else COMPARED_METHODS,
        n_trials=trials,
        random_seed=seed,
        output_dir=out,
        timings=timings,
    ).apply()


@cli.command(name='gen-dataset')
@topology_option
@click.option('--from-frac', type=float, default=configs.schedule_from_frac)
@click.option('--to-frac', type=float, default=configs.schedule_to_frac)
@click.option('--count', type=int, default=configs.schedule_count)
@click.option('--offset', type=float, default=configs.test_offset, help='Test loads shift in kbps')
@click.option('--swarm-size', type=int, default=configs.pso_swarm_size)
@click.option(
    '--paper-rounding', '--rounded-tables', 'rounded_tables', is_flag=True,
    help='Also write copies rounded to whole kbps, 0.1 msec and 4-decimal utilization',
)
@seed_option
@out_option
def gen_dataset(topology, from_frac, to_frac, count, offset, swarm_size, rounded_tables, seed, out):
    """
    Writes train.csv and test.csv, optimal flows of interleaved load schedules.
    """
    training_set, test_set = DatasetGeneration(
        topology_path=topology,
        from_frac=from_frac,
        to_frac=to_frac,
        count=count,
        test_offset=offset,
        swarm_size=swarm_size,
        random_seed=seed,
        output_dir=out,
        rounded_tables=rounded_tables,
    ).apply()

    flagged_loads = training_set.flagged_loads + test_set.flagged_loads
    if flagged_loads:
        raise NonConvergenceError('no convergence after retry for loads {}'.format(flagged_loads))


@cli.command()
@click.option('--dataset', required=True, help='Training CSV')
@topology_option
@click.option('--epochs', type=int, default=configs.n_epochs)
@click.option('--lr', type=float, default=configs.learning_rate)
@click.option('--momentum', type=float, default=configs.momentum)
@click.option('--hidden', type=int, default=configs.hidden_size)
@click.option('--tensorboard', default=None, help='Directory receiving TensorBoard logs')
@seed_option
@out_option
def train(dataset, topology, epochs, lr, momentum, hidden, tensorboard, seed, out):
    """
    Trains the predictor and writes model.txt and learning_curve.csv.
    """
    PredictorTraining(
        dataset_path=dataset,
        topology_path=topology,
        hidden_size=hidden,
        learning_rate=lr,
        momentum=momentum,
        n_epochs=epochs,
        random_seed=seed,
        output_dir=out,
        tensorboard_dir=tensorboard,
    ).apply()


@cli.command()
@click.option('--model', required=True, help='Model file')
@click.option('--load', type=float, required=True, help='Total load in kbps')
@topology_option
@renormalize_option
@out_option
def predict(model, load, topology, renormalize, out):
    """
    Predicts the flows of one load and writes prediction.csv.
    """
    FlowPrediction(
        model_path=model,
        load=load,
        topology_path=topology,
        output_dir=out,
        renormalize=renormalize,
    ).apply()


@cli.command(name='eval')
@click.option('--model', required=True, help='Model file')
@click.option('--dataset', required=True, help='Test CSV')
@click.option('--train-dataset', default=None, help='Training CSV, also evaluated if given')
@topology_option
@renormalize_option
@out_option
def evaluate(model, dataset, train_dataset, topology, renormalize, out):
    """
    Compares predictions with optimal flows and writes evaluation and plot data CSVs.
    """
    PredictorEvaluation(
        model_path=model,
        dataset_path=dataset,
        topology_path=topology,
        training_dataset_path=train_dataset,
        output_dir=out,
        renormalize=renormalize,
    ).apply()


def main(args=None):
    """
    Runs the command line and maps failures to exit codes: 1 for usage errors, 2 for invalid or missing inputs,
    3 for numerical failures.
    Args:
        args (list): command line arguments, sys.argv[1:] if None

    Returns:
        int: exit code
    """
    try:
        result = cli.main(args=args, prog_name='flowopt', standalone_mode=False)
    except NonConvergenceError as error:
        click.echo('Error: {}'.format(error), err=True)
        return EXIT_NUMERICAL
    except (FlowOptError, OSError) as error:
        click.echo('Error: {}'.format(error), err=True)
        return EXIT_INPUT
    except click.UsageError as error:
        error.show()
        return EXIT_USAGE
    except click.ClickException as error:
        error.show()
        return EXIT_INPUT
    except (ValueError, click.exceptions.Abort) as error:
        click.echo('Error: {}'.format(error), err=True)
        return EXIT_USAGE

    # --help exits through click with its own code
    return result if isinstance(result, int) else EXIT_SUCCESS


if __name__ == '__main__':
    sys.exit(main())
