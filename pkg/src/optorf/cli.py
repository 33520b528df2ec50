"""Command-line front end.

Exit codes: 0 success, 2 parse or validation failure, 3 fit did not converge.
"""

import argparse
import sys

import numpy as np

from . import io as csvio
from .absorption import ABSORPTION_PARAMS, fit_absorption, synthesize_transmission
from .calibration import (HeterodyneCalibration, cavity_input_dbm, cavity_input_power, eta_eo_from_measurement,
                          mz_filter_minima)
from .cavity import fit_s11_map, synthesize_s11_map
from .config import ConfigError, ExperimentConfig, is_assumed
from .core import ConvergenceError, db_power, h, mu_B, ordinary
from .fitting import fit_sweep, lorentzian_floor, LorentzianFloorModel
from .resonator import (cooperativity_estimate, intracavity_b_amplitude, mode_frequency, position_factor,
                        rf_rabi_frequency, stored_energy_driven, vacuum_coupling, vacuum_field)
from .sweeps import AXES, AXIS_UNITS, SweepSpec, default_sweep, operating_point, photon_conversion_db, simulate_sweep
from .transduction import eta_eo, eta_q_from_eta_eo, model_rescale

EXIT_OK, EXIT_INVALID, EXIT_NOT_CONVERGED = 0, 2, 3

# reference values reported next to the model output
REFERENCE = {
    "mode_frequency_GHz": 12.49,
    "mu_over_2pi_MHz": 5.0,
    "pop_imbalance": 0.12,
    "eta_eo_dB": -70.2,
    "eta_q_minus_eta_eo_dB": -57.5,
    "eta_eo_rescaled_dB": -84.0,
    "C_mu_estimate": 0.12,
    "C_mu_fitted": 0.135,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _common(p):
    p.add_argument("--config", help="TOML configuration file")
    p.add_argument("--set", action="append", default=[], metavar="SECTION.KEY=VALUE",
                   help="override a configuration value (repeatable)")
    p.add_argument("--rescale-db", type=float, default=None, help="model rescale in dB (default from config, 0)")
    p.add_argument("--seed", type=int, default=0, help="seed for synthetic noise")
    p.add_argument("--out", help="output file (default: standard output)")


def _sweep_args(p):
    p.add_argument("--axis", choices=AXES, default="spin_detuning")
    p.add_argument("--start", type=float, help="axis start (Hz, nm or dBm depending on axis)")
    p.add_argument("--stop", type=float)
    p.add_argument("--steps", type=int, default=201)


def build_parser():
    parser = _Parser(prog="optorf", description="Opto-RF transduction modeling and fitting")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="model efficiency sweep as CSV")
    _common(p)
    _sweep_args(p)

    p = sub.add_parser("fit", help="fit a measurement file")
    _common(p)
    p.add_argument("kind", choices=("s11", "absorption", "sweep"))
    p.add_argument("data")
    p.add_argument("--max-evals", type=int, default=40000)

    p = sub.add_parser("predict", help="operating-point prediction next to reference values")
    _common(p)

    p = sub.add_parser("export-synthetic", help="write a synthetic dataset in the ingestion schema")
    _common(p)
    p.add_argument("kind", choices=("s11", "absorption", "sweep", "lorentzian"))
    p.add_argument("--noise", type=float, default=0.0,
                   help="Gaussian noise: absolute for s11/transmission, dB for sweeps")
    p.add_argument("--freq-points", type=int, default=50)
    p.add_argument("--field-points", type=int, default=50)
    p.add_argument("--freq-span-hz", type=float, default=50e6)
    p.add_argument("--field-span-t", type=float, default=40e-3)
    p.add_argument("--magnitude-only", action="store_true")
    p.add_argument("--points", type=int, default=None, help="absorption (default 1601) or lorentzian (201) points")
    p.add_argument("--span-hz", type=float, default=None, help="absorption or lorentzian full span")
    p.add_argument("--peak-db", type=float, default=-84.0)
    p.add_argument("--floor-db", type=float, default=-103.5)
    p.add_argument("--fwhm-hz", type=float, default=189e6)
    _sweep_args(p)

    p = sub.add_parser("field", help="resonator field and coupling report")
    _common(p)

    p = sub.add_parser("calibrate", help="electro-optics efficiency from heterodyne voltages")
    _common(p)
    p.add_argument("--eta-lo", type=float, default=0.068)
    p.add_argument("--v-sa", type=float, required=True, help="beatnote amplitude (V)")
    p.add_argument("--v-fringes", type=float, required=True, help="fringe amplitude (V)")
    p.add_argument("--contrast", type=float, default=0.8)
    return parser


def _emit(text, out):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _sweep_spec(args, cfg):
    base = default_sweep(args.axis, cfg, args.steps)
    start = base.start if args.start is None else args.start
    stop = base.stop if args.stop is None else args.stop
    return SweepSpec(args.axis, start, stop, args.steps)


def _sweep_csv(cfg, spec):
    x, eo, q = simulate_sweep(cfg, spec)
    comments = [f"axis: {spec.axis} [{AXIS_UNITS[spec.axis]}]", f"model_rescale_db: {cfg.rescale_db!r}"]
    return csvio.write_sweep_csv(None, x, eo, q, comments)


def cmd_simulate(args, cfg):
    _emit(_sweep_csv(cfg, _sweep_spec(args, cfg)), args.out)
    return EXIT_OK


def _s11_guess(cfg):
    cav, sp = cfg.cavity(), cfg.spins()
    return dict(kappa_c=cav.kappa_c, kappa_t=cav.kappa_t, gamma=sp.gamma, C_mu=sp.C_mu, g_factor=sp.g_factor,
                omega_c=cav.omega_c, attenuation_db=min(cfg["cavity"]["attenuation_db"], 0.0))


def _absorption_guess(cfg):
    q = cfg.quartet()
    return dict(od_direct=q.od_direct, od_crossed=q.od_crossed, lorentz_fwhm=q.lorentz_fwhm,
                gauss_fwhm=q.gauss_fwhm, g_ground=q.g_ground, g_excited=q.g_excited, center_shift=0.0,
                temperature=q.temperature)


def _report_fit(res, rows, out):
    lines = [f"{name:<16} {value}" for name, value in rows]
    lines += [f"{'sum_sq':<16} {res.sum_sq!r}", f"{'n_evals':<16} {res.n_evals}",
              f"{'converged':<16} {str(res.converged).lower()}", f"{'message':<16} {res.message}"]
    _emit("\n".join(lines) + "\n", out)


def cmd_fit(args, cfg):
    try:
        if args.kind == "s11":
            data = csvio.read_s11_csv(args.data)
            res = fit_s11_map(data, _s11_guess(cfg), max_evals=args.max_evals)
            p = res.as_dict()
            rows = [("kappa_c_hz", ordinary(p["kappa_c"])), ("kappa_t_hz", ordinary(p["kappa_t"])),
                    ("gamma_hz", ordinary(p["gamma"])), ("C_mu", p["C_mu"]), ("g_factor", p["g_factor"]),
                    ("freq_hz", ordinary(p["omega_c"])), ("attenuation_db", p["attenuation_db"])]
        elif args.kind == "absorption":
            data = csvio.read_transmission_csv(args.data, cfg["absorption"]["center_wavelength_nm"])
            res = fit_absorption(data, _absorption_guess(cfg), cfg["absorption"]["B0_T"], max_evals=args.max_evals)
            p = res.as_dict()
            rows = [(k, p[k]) for k in ABSORPTION_PARAMS] + [("total_fwhm_hz", res.info["total_fwhm"])]
        else:
            x, eo_db, _ = csvio.read_sweep_csv(args.data)
            res = fit_sweep(x, eo_db, max_evals=args.max_evals)
            rows = list(zip(("center", "fwhm", "peak", "floor"), (float(v) for v in res.params)))
            rows += [("peak_db", res.info.get("peak_db")), ("floor_db", res.info.get("floor_db")),
                     ("significant", str(res.info.get("significant")).lower())]
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.result is not None and exc.result.names is not None:
            for name, value in exc.result.as_dict().items():
                print(f"  best {name} = {value!r}", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    _report_fit(res, rows, args.out)
    return EXIT_OK if res.converged else EXIT_NOT_CONVERGED


def prediction(cfg):
    """Operating-point quantities as an ordered list of (name, model value, reference or None)."""
    geom, cav = cfg.geometry(), cfg.cavity()
    drive = cfg.drive()
    p, mu = operating_point(cfg)
    eo = eta_eo(p)
    conv = photon_conversion_db(cfg.optical_power, drive.P_rf, cfg.omega_o, drive.omega_rf)
    eo_db = db_power(eo)
    c_est = cooperativity_estimate(geom, cfg.sample(), cav, cfg.spins(), drive.omega_rf, drive.g_x)
    rows = [
        ("mode_frequency_GHz", mode_frequency(geom) / 1e9, REFERENCE["mode_frequency_GHz"]),
        ("mu_over_2pi_MHz", ordinary(mu) / 1e6, REFERENCE["mu_over_2pi_MHz"]),
        ("pop_imbalance", p.pop_imbalance, REFERENCE["pop_imbalance"]),
        ("eta_eo_dB", eo_db, REFERENCE["eta_eo_dB"]),
        ("eta_q_dB", eo_db + conv, REFERENCE["eta_eo_dB"] + REFERENCE["eta_q_minus_eta_eo_dB"]),
        ("eta_q_minus_eta_eo_dB", conv, REFERENCE["eta_q_minus_eta_eo_dB"]),
        ("rescale_dB", cfg.rescale_db, None),
        ("eta_eo_rescaled_dB", db_power(model_rescale(eo, cfg.rescale_db)),
         REFERENCE["eta_eo_rescaled_dB"] if cfg.rescale_db != 0 else None),
        ("C_mu_estimate", c_est, REFERENCE["C_mu_estimate"]),
        ("C_mu_fitted", cfg.spins().C_mu, REFERENCE["C_mu_fitted"]),
    ]
    return rows


def cmd_predict(args, cfg):
    rows = prediction(cfg)
    lines = [f"{'quantity':<24} {'model':>14} {'reference':>12}"]
    for name, val, ref in rows:
        lines.append(f"{name:<24} {val:>14.6g} {'' if ref is None else format(ref, '.6g'):>12}")
    lines.append("")
    lines.append("note: C_mu_estimate uses the single-photon coupling g_mu = g_x mu_B (a/sqrt(a^2+d^2)) "
                 "sqrt(2 omega mu0/(hbar V)), which is half of g_x mu_B B_vac/hbar; with the latter the "
                 f"estimate would be {4 * rows[8][1]:.3g}. The matrix-element convention is not fixed, so "
                 "agreement is only meaningful within a factor of about 3.")
    lines.append("note: the position factor cos(pi z0/d) = "
                 f"{position_factor(cfg.geometry()):.3f} is "
                 f"{'applied' if cfg['resonator']['include_position_factor'] else 'not applied'} to mu.")
    assumed = [f"{s}.{k}" for s in cfg.values for k in cfg.values[s] if is_assumed(s, k)]
    lines.append("note: defaults not fixed by measurement: " + ", ".join(assumed))
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_field(args, cfg):
    geom, cav, drive = cfg.geometry(), cfg.cavity(), cfg.drive()
    pos = cfg["resonator"]["include_position_factor"]
    B = intracavity_b_amplitude(geom, drive, cav, pos)
    rows = [
        ("mode_frequency_hz", mode_frequency(geom)),
        ("volume_m3", geom.volume),
        ("bx_projection", geom.bx_projection),
        ("position_factor", position_factor(geom)),
        ("position_factor_applied", str(pos).lower()),
        ("stored_energy_J", stored_energy_driven(geom, drive, cav)),
        ("B_amplitude_T", B),
        ("rf_rabi_over_2pi_hz", ordinary(rf_rabi_frequency(geom, drive, cav, pos))),
        ("vacuum_field_T", vacuum_field(geom, drive.omega_rf)),
        ("vacuum_coupling_rad_s", vacuum_coupling(geom, drive.omega_rf, drive.g_x)),
        ("C_mu_estimate", cooperativity_estimate(geom, cfg.sample(), cav, cfg.spins(), drive.omega_rf, drive.g_x)),
    ]
    _emit("".join(f"{k:<26} {v}\n" for k, v in rows), args.out)
    return EXIT_OK


def cmd_calibrate(args, cfg):
    cal = HeterodyneCalibration(args.eta_lo, args.v_sa, args.v_fringes, args.contrast)
    eo = eta_eo_from_measurement(cal)
    chain = cfg.power_chain()
    P_rf = cavity_input_power(chain)
    drive = cfg.drive()
    q = eta_q_from_eta_eo(eo, cfg.optical_power, P_rf, cfg.omega_o, drive.omega_rf)
    rows = [("eta_eo", eo), ("eta_eo_dB", db_power(eo) if eo > 0 else float("-inf")),
            ("cavity_input_dBm", cavity_input_dbm(chain)), ("cavity_input_W", P_rf),
            ("eta_q", q), ("eta_q_dB", db_power(q) if q > 0 else float("-inf")),
            ("mz_first_minimum_hz_for_3.41m", mz_filter_minima(3.41, 1e9)[0])]
    _emit("".join(f"{k:<30} {v}\n" for k, v in rows), args.out)
    return EXIT_OK


def _synthetic_text(args, cfg):
    rng = np.random.default_rng(args.seed)
    if args.kind == "s11":
        cav, sp = cfg.cavity(), cfg.spins()
        f0 = ordinary(cav.omega_c)
        B_res = h * f0 / (sp.g_factor * mu_B)
        freqs = np.linspace(f0 - args.freq_span_hz / 2, f0 + args.freq_span_hz / 2, args.freq_points)
        fields = np.linspace(B_res - args.field_span_t / 2, B_res + args.field_span_t / 2, args.field_points)
        m = synthesize_s11_map(cav, sp, freqs, fields, cfg["cavity"]["attenuation_db"])
        if args.magnitude_only:
            m.values = np.abs(m.values) + args.noise * rng.standard_normal(m.values.shape)
        elif args.noise:
            m.values = m.values + args.noise * (rng.standard_normal(m.values.shape)
                                                + 1j * rng.standard_normal(m.values.shape))
        return csvio.write_s11_csv(None, m, magnitude_only=args.magnitude_only)
    if args.kind == "absorption":
        span = 32e9 if args.span_hz is None else args.span_hz
        nu = np.linspace(-span / 2, span / 2, args.points or 1601)
        spec = synthesize_transmission(cfg.quartet(), nu)
        spec.transmission = spec.transmission + args.noise * rng.standard_normal(nu.size)
        return csvio.write_transmission_csv(None, spec)
    if args.kind == "sweep":
        spec = _sweep_spec(args, cfg)
        x, eo, q = simulate_sweep(cfg, spec)
        noise = args.noise * rng.standard_normal(x.size)
        return csvio.write_sweep_csv(None, x, eo + noise, q + noise,
                                     [f"axis: {spec.axis} [{AXIS_UNITS[spec.axis]}]"])
    # Lorentzian with floor, as seen on a spin-detuning scan
    span = 10 * args.fwhm_hz if args.span_hz is None else args.span_hz
    if not args.floor_db < args.peak_db:
        raise ValueError("floor must lie below the peak")
    x = np.linspace(-span / 2, span / 2, args.points or 201)
    model = LorentzianFloorModel(0.0, args.fwhm_hz, 10 ** (args.peak_db / 10), 10 ** (args.floor_db / 10))
    eo = db_power(lorentzian_floor(x, model)) + args.noise * rng.standard_normal(x.size)
    drive = cfg.drive()
    q = eo + photon_conversion_db(cfg.optical_power, drive.P_rf, cfg.omega_o, drive.omega_rf)
    return csvio.write_sweep_csv(None, x, eo, q, ["axis: spin_detuning [Hz]"])


def cmd_export_synthetic(args, cfg):
    _emit(_synthetic_text(args, cfg), args.out)
    return EXIT_OK


COMMANDS = {"simulate": cmd_simulate, "fit": cmd_fit, "predict": cmd_predict,
            "export-synthetic": cmd_export_synthetic, "field": cmd_field, "calibrate": cmd_calibrate}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        cfg = ExperimentConfig.load(args.config, args.set, args.rescale_db)
        return COMMANDS[args.command](args, cfg)
    except (ConfigError, csvio.CSVParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc.filename or ''}: {exc.strerror}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
