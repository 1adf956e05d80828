from typing import Optional, List
import argparse
import json
import sys
from datetime import datetime, timezone
import numpy as np
import pandas as pd
from ltirelay.channel import ChannelParams
from ltirelay.channel.params import _gain_from_json
from ltirelay.optimizer import SolverOptions
from ltirelay.sweep import SweepSpec
from ltirelay.relay import RelayChannel
from ltirelay.errors import RelayError, DomainError, ConvergenceError
from ltirelay.util import to_unit

SCHEMA_VERSION = "1.0"

_is_number = lambda x: isinstance(x, (int, float)) and not isinstance(x, bool)
_is_int = lambda x: isinstance(x, int) and not isinstance(x, bool)
_is_gain = lambda x: _is_number(x) or (isinstance(x, list) and len(x) == 2 and all(_is_number(y) for y in x))
_is_list_of = lambda check: lambda x: isinstance(x, list) and all(check(y) for y in x)

_common_keys = {
	'a': _is_gain,
	'b': _is_gain,
	'gamma': _is_number,
	'P': _is_number,
	'sigma2': _is_number,
	'seed': _is_int,
	'starts': _is_int,
	'nats': lambda x: isinstance(x, bool),
	'format': lambda x: x in ["json", "csv"],
	'quiet': lambda x: isinstance(x, bool),
	'out': lambda x: isinstance(x, str)
}

_command_keys = {
	'capacity': {},
	'sweep': {
		'param': lambda x: x in SweepSpec._params_available,
		'values': _is_list_of(_is_number),
		'range': lambda x: isinstance(x, list) and len(x) == 3 and all(_is_number(y) for y in x),
		'scale': lambda x: x in SweepSpec._scales_available,
		'schemes': _is_list_of(lambda y: y in SweepSpec._schemes_available)
	},
	'oracle': {'n': _is_int},
	'verify': {'block_sizes': _is_list_of(_is_int), 'grid_size': _is_int},
	'synth': {'delta': _is_number, 'L': _is_int}
}

_defaults = {
	'a': 1.0, 'b': 1.0, 'gamma': 1.0, 'P': 1.0, 'sigma2': 1.0,
	'seed': 0, 'starts': 64, 'nats': False, 'quiet': False, 'out': None,
	'scale': "linear", 'schemes': ["lti", "iaf", "direct", "cutset"],
	'n': 64, 'block_sizes': [32, 64, 128, 256], 'grid_size': 4096,
	'delta': 0.01 * np.pi, 'L': 4096
}


class UsageError(Exception):
	"""Invalid command line or configuration."""


def _gain(text: str):
	try:
		value = complex(text.replace(" ", ""))
	except ValueError:
		raise argparse.ArgumentTypeError(f"'{text}' is not a real or complex number")
	return value.real if value.imag == 0.0 else value


def build_parser() -> argparse.ArgumentParser:
	"""The argument parser with the five subcommands."""
	common = argparse.ArgumentParser(add_help = False)
	common.add_argument("--a", type = _gain, help = "Source to relay gain (real or complex, e.g. 1+0.5j).")
	common.add_argument("--b", type = _gain, help = "Relay to destination gain (real or complex).")
	common.add_argument("--gamma", type = float, help = "Relay power ratio.")
	common.add_argument("--P", type = float, help = "Source power.")
	common.add_argument("--sigma2", type = float, help = "Noise variance.")
	common.add_argument("--seed", type = int, help = "Random seed of the multistart search.")
	common.add_argument("--starts", type = int, help = "Number of multistart seeds.")
	common.add_argument("--nats", action = "store_true", default = None, help = "Report rates in nats instead of bits.")
	common.add_argument("--out", type = str, help = "Output file.")
	common.add_argument("--format", choices = ["json", "csv"], help = "Output format.")
	common.add_argument("--config", type = str, help = "JSON file whose keys mirror the long flags.")
	common.add_argument("--quiet", action = "store_true", default = None, help = "Disable the console progress output.")

	parser = argparse.ArgumentParser(prog = "ltirelay", description = "Capacity of the Gaussian relay channel with LTI relaying.")
	subparsers = parser.add_subparsers(dest = "command", required = True)

	subparsers.add_parser("capacity", parents = [common], help = "Rate report of one channel.")

	sweep = subparsers.add_parser("sweep", parents = [common], help = "Rates of several schemes along one parameter.")
	sweep.add_argument("--param", choices = SweepSpec._params_available, help = "Swept parameter.")
	sweep.add_argument("--values", type = float, nargs = "+", help = "Explicit values of the swept parameter.")
	sweep.add_argument("--range", type = float, nargs = 3, metavar = ("MIN", "MAX", "COUNT"), help = "Grid of values.")
	sweep.add_argument("--scale", choices = SweepSpec._scales_available, help = "Spacing of the --range grid.")
	sweep.add_argument("--schemes", nargs = "+", choices = SweepSpec._schemes_available, help = "Schemes to evaluate.")

	oracle = subparsers.add_parser("oracle", parents = [common], help = "Cross-check with the frequency-bin oracle.")
	oracle.add_argument("--n", type = int, help = "Number of bins (>= 2).")

	verify = subparsers.add_parser("verify", parents = [common], help = "Toeplitz convergence study.")
	verify.add_argument("--block-sizes", dest = "block_sizes", type = int, nargs = "+", help = "Block sizes n.")
	verify.add_argument("--grid-size", dest = "grid_size", type = int, help = "Spectrum grid size.")

	synth = subparsers.add_parser("synth", parents = [common], help = "Filter-bank synthesis of the optimal allocation.")
	synth.add_argument("--delta", type = float, help = "Transition half-width in rad.")
	synth.add_argument("--L", type = int, help = "Filter half-length (>= 1).")
	return parser


def resolve_settings(args: argparse.Namespace) -> dict:
	"""
	Merge the explicit flags, the configuration file and the defaults, in this order of priority.

	Raises
	------
	UsageError
		If the configuration file is unreadable, has unknown keys or values of a wrong type.
	"""
	allowed = dict(_common_keys)
	allowed.update(_command_keys[args.command])
	config = {}
	if args.config is not None:
		try:
			with open(args.config, 'r') as f:
				config = json.load(f)
		except (OSError, json.JSONDecodeError) as err:
			raise UsageError(f"Cannot read the config file '{args.config}': {err}")
		if not isinstance(config, dict):
			raise UsageError("The config file must hold a JSON object")
		unknown = sorted(set(config) - set(allowed))
		if unknown:
			raise UsageError(f"Unknown config keys for '{args.command}': {unknown}")
		for key, value in config.items():
			if not allowed[key](value):
				raise UsageError(f"Config key '{key}' - incorrect value, received - {value}")
		for key in ["a", "b"]:
			if key in config:
				config[key] = _gain_from_json(config[key])

	res = {}
	for key in allowed:
		value = getattr(args, key, None)
		if value is None:
			value = config.get(key, _defaults.get(key))
		res[key] = value
	if res.get('format') is None:
		res['format'] = "csv" if args.command == "sweep" else "json"
	return res


def _channel(settings: dict) -> RelayChannel:
	params = ChannelParams(a = settings['a'], b = settings['b'], gamma = settings['gamma'], P = settings['P'], sigma2 = settings['sigma2'])
	opts = SolverOptions(n_starts = settings['starts'], seed = settings['seed'])
	return RelayChannel(params, opts, console_output = not settings['quiet'])


def _records(df: pd.DataFrame) -> list:
	return df.astype(object).where(df.notna(), None).to_dict(orient = "records")


def _document(command: str, unit: str, result) -> dict:
	return {
		'schema_version': SCHEMA_VERSION,
		'command': command,
		'timestamp': datetime.now(timezone.utc).isoformat(),
		'unit': unit,
		'result': result
	}


def _json_default(value):
	if isinstance(value, np.generic):
		return value.item()
	if isinstance(value, np.ndarray):
		return value.tolist()
	raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def _emit(text: str, out: Optional[str]):
	if out is None:
		sys.stdout.write(text if text.endswith("\n") else text + "\n")
	else:
		with open(out, 'w') as f:
			f.write(text)


def cmd_capacity(relay: RelayChannel, settings: dict, unit: str):
	report = relay.capacity()
	if settings['format'] == "csv":
		return report.to_dataframe(unit)
	return report.to_dict(unit)


def cmd_sweep(relay: RelayChannel, settings: dict, unit: str):
	if settings['param'] is None:
		raise UsageError("'sweep' needs --param")
	if settings['values'] is not None:
		values = list(settings['values'])
	elif settings['range'] is not None:
		lo, hi, count = settings['range']
		if count != int(count):
			raise UsageError(f"--range COUNT must be an integer, received - {count}")
		values = SweepSpec.grid(lo, hi, int(count), settings['scale'])
	else:
		raise UsageError("'sweep' needs --values or --range")
	spec = SweepSpec(settings['param'], values, relay.params, list(settings['schemes']))
	res = relay.sweep(spec, unit = unit)
	return res if settings['format'] == "csv" else _records(res)


def cmd_oracle(relay: RelayChannel, settings: dict, unit: str):
	if settings['n'] < 2:
		raise UsageError(f"--n must be >= 2, received - {settings['n']}")
	res = relay.oracle_check(settings['n'])
	for key in ["bin_rate", "mode_rate", "lifted_rate"]:
		res[key] = float(to_unit(res[key], unit))
	if settings['format'] == "csv":
		return pd.DataFrame([{key: res[key] for key in ["n", "bin_rate", "mode_rate", "lifted_rate", "relative_gap", "clusters"]}])
	return res


def cmd_verify(relay: RelayChannel, settings: dict, unit: str):
	if any(n < 1 for n in settings['block_sizes']):
		raise UsageError(f"--block-sizes must be positive, received - {settings['block_sizes']}")
	tables = relay.verify(block_sizes = settings['block_sizes'], grid_size = settings['grid_size'])
	for table in tables.values():
		for column in ["toeplitz_mi", "spectral_rate", "gap"]:
			table[column] = to_unit(table[column], unit)
	if settings['format'] == "csv":
		return pd.concat([table.assign(study = name) for name, table in tables.items()], ignore_index = True)
	return {name: _records(table) for name, table in tables.items()}


def cmd_synth(relay: RelayChannel, settings: dict, unit: str):
	if settings['L'] < 1:
		raise UsageError(f"--L must be >= 1, received - {settings['L']}")
	res = relay.synthesize(settings['delta'], settings['L'], settings['out'])
	for key in ["c_lti", "achieved", "achieved_taps"]:
		res[key] = float(to_unit(res[key], unit))
	if settings['format'] == "csv":
		return pd.DataFrame([{key: value for key, value in res.items() if key != "plan"}])
	return res


_handlers = {
	'capacity': cmd_capacity,
	'sweep': cmd_sweep,
	'oracle': cmd_oracle,
	'verify': cmd_verify,
	'synth': cmd_synth
}


def main(argv: Optional[List[str]] = None) -> int:
	"""
	Entry point of the `ltirelay` command.

	Returns
	-------
	int
		0 on success, 1 when a computation fails, 2 on a usage error.
	"""
	parser = build_parser()
	try:
		args = parser.parse_args(argv)
	except SystemExit as err:
		return int(err.code) if err.code is not None else 0

	try:
		settings = resolve_settings(args)
		relay = _channel(settings)
		unit = "nats" if settings['nats'] else "bits"
		result = _handlers[args.command](relay, settings, unit)
	except (UsageError, DomainError) as err:
		parser.print_usage(sys.stderr)
		sys.stderr.write(f"ltirelay {args.command}: error: {err}\n")
		return 2
	except (RelayError, OSError) as err:
		diagnostic = {'error': type(err).__name__, 'message': str(err)}
		if isinstance(err, ConvergenceError):
			diagnostic["residuals"] = err.residuals
		sys.stdout.write(json.dumps(_document(args.command, "bits", diagnostic), indent = 2, default = _json_default) + "\n")
		return 1

	out = None if args.command == "synth" else settings['out']
	try:
		if isinstance(result, pd.DataFrame):
			_emit(result.to_csv(index = False), out)
		else:
			_emit(json.dumps(_document(args.command, unit, result), indent = 2, default = _json_default), out)
	except OSError as err:
		sys.stderr.write(f"ltirelay {args.command}: error: {err}\n")
		return 1
	return 0


if __name__ == "__main__":
	raise SystemExit(main())
