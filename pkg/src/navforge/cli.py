"""navforge command line.

Exit codes: 0 ok, 1 usage, 2 parse error, 3 I/O error, 4 unknown PRN,
5 field overflow while encoding.
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import math
import os
import sys
import tempfile

from . import clock as clk
from . import framing
from .constellation import ConstellationSpec, generate_constellation, position_from_elements, write_positions_csv
from .dop import geodetic_to_ecef, pdop_series, write_dop_csv
from .ephemeris import PhysicalConstants, extrapolate, write_elements_csv
from .errors import FieldOverflow, NavForgeError, RinexError, UnknownPrn
from .gpstime import (
    SECONDS_PER_WEEK,
    CalendarDateTime,
    ObservationTimes,
    gps_seconds,
    gps_week,
    reference_times,
    z_count,
)
from .rinex import read_nav_file, write_records_csv

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_IO, EXIT_PRN, EXIT_OVERFLOW = range(6)

DEFAULT_START = "2011-06-30T08:00:00"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _epoch(text):
    try:
        return CalendarDateTime.parse(text)
    except (ValueError, NavForgeError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _write_atomic(path, data):
    """Write all of ``data`` or nothing: temp file in the target directory, then rename."""
    if path == "-":
        if isinstance(data, bytes):
            sys.stdout.buffer.write(data)
        else:
            sys.stdout.write(data)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".navforge-", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data if isinstance(data, bytes) else data.encode("ascii"))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(writer, rows):
    buf = io.StringIO(newline="")
    writer(rows, buf)
    return buf.getvalue()


def _gps_seconds(date, timezone):
    """Continuous GPS seconds for a local epoch ``timezone`` hours ahead of GPS."""
    return gps_seconds(date) - timezone * 3600


def _constellation_spec(args):
    return ConstellationSpec(
        semi_major_axis=args.semi_major_axis,
        eccentricity=args.eccentricity,
        inclination_deg=args.inclination,
        phase_offset_per_plane_deg=args.phase_offset,
    )


def _time_grid(start, stop, step):
    """``start``, ``start +/- step``, ... ending exactly at ``stop``."""
    if step is None or start == stop:
        return [start] if start == stop else [start, stop]
    direction = 1 if stop > start else -1
    n = int(math.floor(abs(stop - start) / step + 1e-9))
    grid = [start + direction * k * step for k in range(n + 1)]
    if grid[-1] != stop:
        grid.append(stop)
    return grid


def _select_record(nav, prn, epoch=None):
    recs = nav.for_prn(prn)
    if epoch is not None:
        recs = [r for r in recs if r.epoch == epoch]
    if not recs:
        what = f"PRN {prn}" + (f" at {epoch.isoformat()}" if epoch else "")
        raise UnknownPrn(f"no record for {what}")
    return recs[0]


# --- commands --------------------------------------------------------------------

def cmd_parse_rinex(args, constants):
    nav = read_nav_file(args.input)
    _write_atomic(args.output, _csv_text(write_records_csv, nav.records))
    return EXIT_OK


def cmd_extrapolate(args, constants):
    nav = read_nav_file(args.input)
    rec = _select_record(nav, args.prn, args.from_epoch)
    week_start = gps_week(rec.epoch) * SECONDS_PER_WEEK
    t_start = gps_seconds(rec.epoch) - week_start
    t_stop = _gps_seconds(args.to, args.timezone) - week_start
    eph = rec.to_ephemeris()
    series = [extrapolate(eph, t, constants) for t in _time_grid(t_start, t_stop, args.step)]
    _write_atomic(args.output, _csv_text(write_elements_csv, series))
    return EXIT_OK


def _ephemeris_for_toc(args, toc_cont, toe_sow, constants):
    if args.input is None:
        ephs = generate_constellation(_constellation_spec(args), toe_sow)
        if not 1 <= args.prn <= len(ephs):
            raise UnknownPrn(f"synthetic constellation has no PRN {args.prn}")
        return ephs[args.prn - 1]
    rec = _select_record(read_nav_file(args.input), args.prn)
    toe_cont = gps_week(rec.epoch) * SECONDS_PER_WEEK + rec.toe
    eph = dataclasses.replace(rec.to_ephemeris(), toe=toe_cont)
    return dataclasses.replace(extrapolate(eph, toc_cont, constants), toe=toe_sow)


def cmd_gen_nav(args, constants):
    tp = reference_times(args.start, args.timezone, args.paper_literal_toc)
    # Unset observation times default to the reference epoch, i.e. age 0.
    obs = ObservationTimes(
        tp.toc if args.t_clock_obs is None else args.t_clock_obs,
        tp.toe if args.t_eph_obs is None else args.t_eph_obs,
    )
    tp = reference_times(args.start, args.timezone, args.paper_literal_toc, obs)

    start_gps = _gps_seconds(args.start, args.timezone)
    week_start = math.floor(start_gps / SECONDS_PER_WEEK) * SECONDS_PER_WEEK
    z = z_count(start_gps - week_start)

    eph = _ephemeris_for_toc(args, week_start + tp.toc, tp.toe, constants)
    t_gps0 = tp.toc if args.t_gps0 is None else args.t_gps0
    mode = "paper_literal" if args.paper_literal_clock else "exact"
    poly = clk.rereference(clk.ClockInit(args.clock_a1, args.clock_a2, t_gps0), tp.toc, mode)

    sf2, sf3 = framing.ephemeris_payloads(eph, tp.iode)
    payloads = {1: framing.clock_payload(poly, tp.iodc), 2: sf2, 3: sf3}
    frames = framing.assemble_frames(z, payloads, args.frames)
    stream = [sf for frame in frames for sf in frame]
    fmt = "packed" if args.format == "bin" else "text"
    _write_atomic(args.output, framing.serialize_bits(stream, fmt))
    return EXIT_OK


def _series_times(args):
    if not args.step > 0:
        raise UsageError(f"--step must be positive, got {args.step}")
    if args.duration < 0:
        raise UsageError(f"--duration must be non-negative, got {args.duration}")
    start_gps = _gps_seconds(args.start, args.timezone)
    return start_gps - math.floor(start_gps / SECONDS_PER_WEEK) * SECONDS_PER_WEEK


def cmd_constellation(args, constants):
    t0 = _series_times(args)
    ephs = generate_constellation(_constellation_spec(args), t0)
    earth_fixed = args.frame == "ecef"
    rows = []
    for k in range(int(args.duration // args.step) + 1):
        t = t0 + k * args.step
        rows.extend((t, e.prn, position_from_elements(e, t, constants, earth_fixed)) for e in ephs)
    _write_atomic(args.output, _csv_text(write_positions_csv, rows))
    return EXIT_OK


def cmd_dop(args, constants):
    t0 = _series_times(args)
    if not -90 <= args.lat <= 90 or not -180 <= args.lon <= 360:
        raise UsageError("latitude/longitude out of range")
    user = geodetic_to_ecef(args.lat, args.lon, args.height, constants)
    results = pdop_series(_constellation_spec(args), user, t0, args.duration,
                          args.step, args.mask, constants)
    _write_atomic(args.output, _csv_text(write_dop_csv, results))
    return EXIT_OK


# --- argument parsing -------------------------------------------------------------

def _add_constellation_flags(p):
    d = ConstellationSpec()
    p.add_argument("--semi-major-axis", type=float, default=d.semi_major_axis, metavar="M")
    p.add_argument("--eccentricity", type=float, default=d.eccentricity)
    p.add_argument("--inclination", type=float, default=d.inclination_deg, metavar="DEG")
    p.add_argument("--phase-offset", type=float, default=d.phase_offset_per_plane_deg,
                   metavar="DEG", help="in-plane phase stagger between adjacent planes")


def build_parser():
    parser = _Parser(prog="navforge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, output=True):
        p.add_argument("--timezone", type=int, default=0,
                       help="hours local time is ahead of GPS time (default 0)")
        if output:
            p.add_argument("-o", "--output", required=True, help="output path, '-' for stdout")

    p = sub.add_parser("parse-rinex", help="dump a RINEX 2 navigation file as CSV")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_parse_rinex)

    p = sub.add_parser("extrapolate", help="J2-secular element time series for one PRN")
    p.add_argument("input")
    p.add_argument("--prn", type=int, required=True)
    p.add_argument("--to", type=_epoch, required=True, metavar="EPOCH")
    p.add_argument("--from", dest="from_epoch", type=_epoch, default=None, metavar="EPOCH",
                   help="record epoch to start from (default: first record of the PRN)")
    p.add_argument("--step", type=float, default=None, metavar="S")
    common(p)
    p.set_defaults(func=cmd_extrapolate)

    p = sub.add_parser("gen-nav", help="assemble a navigation message bitstream")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("input", nargs="?", default=None)
    src.add_argument("--synthetic", action="store_true", help="use the nominal constellation")
    p.add_argument("--prn", type=int, default=1)
    p.add_argument("--start", type=_epoch, required=True, metavar="EPOCH")
    p.add_argument("--frames", type=int, default=25)
    p.add_argument("--format", choices=("bits", "bin"), default="bits")
    p.add_argument("--paper-literal-toc", action="store_true", help="add the fixed 43 s offset to toc")
    p.add_argument("--paper-literal-clock", action="store_true",
                   help="re-reference a1 without the factor 2")
    p.add_argument("--clock-a1", type=float, default=0.0, metavar="S/S")
    p.add_argument("--clock-a2", type=float, default=0.0, metavar="S/S2")
    p.add_argument("--t-gps0", type=float, default=None, metavar="SOW",
                   help="clock start epoch, seconds of week (default: toc)")
    p.add_argument("--t-clock-obs", type=float, default=None, metavar="SOW")
    p.add_argument("--t-eph-obs", type=float, default=None, metavar="SOW")
    _add_constellation_flags(p)
    common(p)
    p.set_defaults(func=cmd_gen_nav)

    for name, func, helptext in (
        ("constellation", cmd_constellation, "satellite positions of the nominal constellation"),
        ("dop", cmd_dop, "PDOP time series for a user location"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--start", type=_epoch, default=_epoch(DEFAULT_START), metavar="EPOCH")
        p.add_argument("--duration", type=float, default=86400.0, metavar="S")
        p.add_argument("--step", type=float, default=300.0, metavar="S")
        _add_constellation_flags(p)
        common(p)
        p.set_defaults(func=func)
        if name == "constellation":
            p.add_argument("--frame", choices=("ecef", "inertial"), default="ecef")
        else:
            p.add_argument("--lat", type=float, default=30.0)
            p.add_argument("--lon", type=float, default=120.0)
            p.add_argument("--height", type=float, default=0.0)
            p.add_argument("--mask", type=float, default=5.0, metavar="DEG")
    return parser


def _fail(code, message):
    print(f"navforge: error: {message}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "frames", 1) < 1:
        parser.error("--frames must be at least 1")
    try:
        constants = PhysicalConstants.from_env()
    except OSError as exc:
        return _fail(EXIT_IO, f"constants file: {exc}")
    except ValueError as exc:
        return _fail(EXIT_USAGE, str(exc))
    try:
        return args.func(args, constants)
    except UsageError as exc:
        return _fail(EXIT_USAGE, str(exc))
    except RinexError as exc:
        return _fail(EXIT_PARSE, f"{args.input}: {exc}")
    except UnknownPrn as exc:
        return _fail(EXIT_PRN, str(exc))
    except FieldOverflow as exc:
        return _fail(EXIT_OVERFLOW, str(exc))
    except OSError as exc:
        return _fail(EXIT_IO, str(exc))
    except (NavForgeError, ValueError) as exc:
        return _fail(EXIT_USAGE, str(exc))


if __name__ == "__main__":
    sys.exit(main())
