"""Command-line front end.

Every command takes an explicit seed, so runs are reproducible, and every
CSV output starts with ``# config:`` comment lines recording the full run
configuration.  Exit codes: 0 success, 2 configuration error, 3
protocol/framing error, 4 counter error.
"""

from __future__ import annotations

import sys
import time
from math import log2

import click

from .baselines import EmbedStats
from .channel import History, load_channel_file, min_entropy
from .ecc import bits_from_bytes, bits_from_hex, hex_from_bits
from .errors import ConfigError, CounterError, ProtocolError
from .mail import read_trace, write_trace
from .prf import BitFunction, Counter, Key
from .protocols import ADDRESS1, ADDRESS2, StegoKeyState, p1_embed, p1_extract, p2_embed, p2_extract
from .rng import RngState
from .security import (ALL_SYSTEMS, DISTINGUISHER_NAMES, SystemConfig,
                       benchmark_scaling, build_distinguisher, capacity,
                       embed_message, extract_message, run_game,
                       transmission_rate)

DEFAULT_BENCH_LENGTHS = "256,512,1024,2048,4096,8192,16384"


def _config_header(**params) -> str:
    items = " ".join(f"{k}={v}" for k, v in sorted(params.items()))
    return f"# config: {items}"


def _read_message_bits(path: str, message_format: str) -> list[int]:
    with open(path, "rb") as f:
        raw = f.read()
    if message_format == "hex":
        try:
            return bits_from_hex(raw.decode("ascii"))
        except UnicodeDecodeError as e:
            raise ConfigError(f"message file {path} is not hex text") from e
    return bits_from_bytes(raw)


def _system_config(system: str, count, copies, repetition, random_fn) -> SystemConfig:
    return SystemConfig(system=system, count=count, copies=copies,
                        repetition=repetition, random_fn=random_fn)


@click.group()
def main() -> None:
    """Simulate and attack black-box stegosystems over email channels."""


@main.command()
@click.option("--protocol", type=click.Choice(["p1", "p2"]), required=True)
@click.option("--key", "key_hex", required=True, help="Secret key as hex.")
@click.option("--counter", default=0, show_default=True, help="Initial counter value.")
@click.option("--message", "message_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--message-format", type=click.Choice(["hex", "raw"]),
              default="hex", show_default=True)
@click.option("--channel", "channel_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--seed", required=True, type=int)
@click.option("--start-tick", default=0, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
def embed(protocol, key_hex, counter, message_path, message_format,
          channel_path, seed, start_tick, out_path) -> None:
    """Embed a message file into a mail trace."""
    spec = load_channel_file(channel_path)
    bits = _read_message_bits(message_path, message_format)
    if not bits:
        raise ConfigError("message is empty")
    state = StegoKeyState(BitFunction.keyed(Key.from_hex(key_hex)), Counter(counter))
    rng = RngState(seed)
    stats = EmbedStats()
    if protocol == "p1":
        mails = p1_embed(state, bits, History(), start_tick, spec, rng, stats)
    else:
        mails = p2_embed(state, bits, History(), start_tick, spec, rng, stats)
    write_trace(mails, out_path)
    click.echo(f"embedded {stats.bits_embedded} bits into {stats.docs_emitted} mails "
               f"({stats.samples_drawn} channel draws) -> {out_path}")


@main.command()
@click.option("--protocol", type=click.Choice(["p1", "p2"]), required=True)
@click.option("--key", "key_hex", required=True)
@click.option("--counter", default=0, show_default=True)
@click.option("--in", "in_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--in2", "in2_path", default=None,
              type=click.Path(exists=True, dir_okay=False),
              help="Second mailbox trace (p1 only).")
def extract(protocol, key_hex, counter, in_path, in2_path) -> None:
    """Recover the hiddentext from trace file(s); prints hex."""
    state = StegoKeyState(BitFunction.keyed(Key.from_hex(key_hex)), Counter(counter))
    mails = read_trace(in_path)
    if protocol == "p1":
        # A single trace is the full sent sequence; route it into the two
        # mailboxes.  Two traces are the mailboxes themselves.
        if in2_path is not None:
            box1, box2 = mails, read_trace(in2_path)
        else:
            box1 = [m for m in mails if m.addresses == (ADDRESS1,)]
            box2 = [m for m in mails if m.addresses == (ADDRESS2,)]
            if len(box1) + len(box2) != len(mails):
                raise ProtocolError("trace contains mail outside the p1 address set")
        bits = p1_extract(state, box1, box2)
    else:
        if in2_path is not None:
            raise ConfigError("p2 extraction reads a single mailbox trace")
        bits = p2_extract(state, mails)
    click.echo(hex_from_bits(bits))


@main.command()
@click.option("--system", type=click.Choice(list(ALL_SYSTEMS)), required=True)
@click.option("--channel", "channel_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--key", "key_hex", default=None, help="Secret key as hex (omit with --random-fn).")
@click.option("--bits", default=64, show_default=True, help="Message bits per trial.")
@click.option("--trials", default=100, show_default=True)
@click.option("--count", default=None, type=int, help="Rejection-sampling budget (s1/s3).")
@click.option("--copies", default=3, show_default=True, help="Documents per bit (s3/s4).")
@click.option("--ecc-repetition", "repetition", default=5, show_default=True)
@click.option("--random-fn", is_flag=True, help="Replace the keyed PRF by a random function.")
@click.option("--seed", required=True, type=int)
@click.option("--out", "out_path", default=None, type=click.Path(dir_okay=False),
              help="Write the per-trial CSV here; aggregate always goes to stdout.")
def simulate(system, channel_path, key_hex, bits, trials, count, copies,
             repetition, random_fn, seed, out_path) -> None:
    """Round-trip reliability simulation; per-trial and aggregate CSV."""
    spec = load_channel_file(channel_path)
    cfg = _system_config(system, count, copies, repetition, random_fn)
    if key_hex is None and not random_fn:
        raise ConfigError("either --key or --random-fn is required")
    header = _config_header(command="simulate", system=system, channel=channel_path,
                            bits=bits, trials=trials, count=count, copies=copies,
                            repetition=repetition, random_fn=random_fn, seed=seed)
    rng = RngState(seed)
    fixed_fn = BitFunction.keyed(Key.from_hex(key_hex)) if key_hex is not None else None
    rows = []
    total = EmbedStats()
    failed = 0
    bit_errors = 0
    wall_total = 0.0
    for t in range(trials):
        trial_rng = rng.spawn(t)
        fn = fixed_fn if fixed_fn is not None else BitFunction.random_oracle(
            int.from_bytes(trial_rng.spawn(0).bytes(8), "big"))
        msg = trial_rng.spawn(1).bits(bits)
        stats = EmbedStats()
        t0 = time.perf_counter()
        outputs = embed_message(cfg, fn, msg, History(), spec, trial_rng.spawn(2),
                                stats=stats)
        recovered = extract_message(cfg, fn, outputs)
        wall = time.perf_counter() - t0
        errors = sum(a != b for a, b in zip(msg, recovered))
        trial_failed = int(bool(errors) or len(recovered) != len(msg))
        failed += trial_failed
        bit_errors += errors
        wall_total += wall
        total.samples_drawn += stats.samples_drawn
        total.docs_emitted += stats.docs_emitted
        total.bits_embedded += stats.bits_embedded
        rows.append(f"{t},{bits},{errors},{trial_failed},{stats.samples_drawn},"
                    f"{stats.docs_emitted},{wall:.6f}")
    if out_path is not None:
        with open(out_path, "w", encoding="utf-8") as f:
            f.write(header + "\n")
            f.write("trial,bits,bit_errors,failed,samples_drawn,docs_emitted,wall_time_s\n")
            f.write("".join(row + "\n" for row in rows))
    click.echo(header)
    click.echo("trials,bits_total,failure_rate,bit_error_rate,samples_drawn,"
               "docs_emitted,wall_time_s")
    click.echo(f"{trials},{trials * bits},{failed / trials!r},"
               f"{bit_errors / (trials * bits)!r},{total.samples_drawn},"
               f"{total.docs_emitted},{wall_total:.6f}")


@main.command()
@click.option("--system", type=click.Choice(list(ALL_SYSTEMS)), required=True)
@click.option("--distinguisher", type=click.Choice(list(DISTINGUISHER_NAMES)),
              required=True)
@click.option("--channel", "channel_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--trials", default=1000, show_default=True)
@click.option("--bits-per-game", default=100, show_default=True)
@click.option("--significance", default=0.05, show_default=True)
@click.option("--count", default=None, type=int)
@click.option("--copies", default=3, show_default=True)
@click.option("--ecc-repetition", "repetition", default=5, show_default=True)
@click.option("--random-fn", is_flag=True)
@click.option("--seed", required=True, type=int)
def attack(system, distinguisher, channel_path, trials, bits_per_game,
           significance, count, copies, repetition, random_fn, seed) -> None:
    """Run the ST/CT distinguishing game; one CSV result row."""
    spec = load_channel_file(channel_path)
    cfg = _system_config(system, count, copies, repetition, random_fn)
    warden = build_distinguisher(distinguisher, cfg, spec, significance)
    estimate = run_game(warden, cfg, spec, trials, RngState(seed), bits_per_game)
    click.echo(_config_header(command="attack", system=system,
                              distinguisher=distinguisher, channel=channel_path,
                              trials=trials, bits_per_game=bits_per_game,
                              significance=significance, seed=seed))
    click.echo("system,distinguisher,trials,advantage,halfwidth,p_st,p_ct")
    click.echo(f"{system},{distinguisher},{trials},{estimate.value!r},"
               f"{estimate.halfwidth!r},{estimate.p_st!r},{estimate.p_ct!r}")


@main.command()
@click.option("--system", "systems", default="all", show_default=True,
              help="Comma-separated system names, or 'all'.")
@click.option("--channel", "channel_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--bits", default=120, show_default=True)
@click.option("--count", default=None, type=int)
@click.option("--copies", default=3, show_default=True)
@click.option("--ecc-repetition", "repetition", default=5, show_default=True)
@click.option("--seed", required=True, type=int)
def rate(systems, channel_path, bits, count, copies, repetition, seed) -> None:
    """Measured transmission rate (hiddentext bits per document)."""
    spec = load_channel_file(channel_path)
    names = list(ALL_SYSTEMS) if systems == "all" else systems.split(",")
    click.echo(_config_header(command="rate", systems=",".join(names),
                              channel=channel_path, bits=bits, count=count,
                              copies=copies, repetition=repetition, seed=seed))
    click.echo("system,bits,docs,rate")
    for i, name in enumerate(names):
        cfg = _system_config(name.strip(), count, copies, repetition, False)
        value = transmission_rate(cfg, spec, RngState(seed).spawn(i), bits=bits)
        docs = round(bits / value)
        click.echo(f"{cfg.system},{bits},{docs},{value!r}")


@main.command("capacity")
@click.option("--p", "crossover", required=True, type=float)
def capacity_cmd(crossover) -> None:
    """Binary symmetric channel capacity 1 - H(p)."""
    click.echo(f"{capacity(crossover)!r}")


@main.command("channel-info")
@click.option("--channel", "channel_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
def channel_info(channel_path) -> None:
    """Alphabet size, min-entropy, and top document probabilities."""
    spec = load_channel_file(channel_path)
    click.echo(f"kind: {spec.kind}")
    click.echo(f"alphabet_size: {spec.alphabet_size}")
    click.echo(f"min_entropy_bits: {min_entropy(spec, History())!r}")
    if spec.kind == "markov1":
        rows_max = max(max(row) for row in spec.matrix)
        click.echo(f"min_entropy_bits_worst_row: {-log2(rows_max)!r}")
        probs = spec.initial
    else:
        probs = spec.probs
    top = sorted(enumerate(probs), key=lambda kv: (-kv[1], kv[0]))[:5]
    for doc_id, p in top:
        click.echo(f"doc {doc_id}: {p!r}")


@main.command()
@click.option("--systems", default="p1,p2", show_default=True)
@click.option("--lengths", default=DEFAULT_BENCH_LENGTHS, show_default=True)
@click.option("--channel", "channel_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--count", default=None, type=int)
@click.option("--copies", default=3, show_default=True)
@click.option("--ecc-repetition", "repetition", default=5, show_default=True)
@click.option("--repeats", default=3, show_default=True)
@click.option("--seed", required=True, type=int)
@click.option("--out", "out_path", default=None, type=click.Path(dir_okay=False))
def bench(systems, lengths, channel_path, count, copies, repetition, repeats,
          seed, out_path) -> None:
    """Wall-time scaling across message lengths, with log-log slope fits."""
    spec = load_channel_file(channel_path)
    sizes = [int(x) for x in lengths.split(",")]
    header = _config_header(command="bench", systems=systems, lengths=lengths,
                            channel=channel_path, repeats=repeats, seed=seed)
    lines = [header, "system,bits,embed_seconds,extract_seconds,samples_drawn,"
                     "docs_emitted,prf_evals"]
    slopes = []
    for i, name in enumerate(systems.split(",")):
        cfg = _system_config(name.strip(), count, copies, repetition, False)
        report = benchmark_scaling(cfg, spec, sizes, RngState(seed).spawn(i),
                                   repeats=repeats)
        for row in report.rows:
            lines.append(f"{row.system},{row.bits},{row.embed_seconds:.6f},"
                         f"{row.extract_seconds:.6f},{row.samples_drawn},"
                         f"{row.docs_emitted},{row.prf_evals}")
        slopes.append(f"# {cfg.system}: embed_slope={report.embed_slope:.3f} "
                      f"extract_slope={report.extract_slope:.3f}")
    lines.extend(slopes)
    text = "".join(line + "\n" for line in lines)
    if out_path is not None:
        with open(out_path, "w", encoding="utf-8") as f:
            f.write(text)
    click.echo(text, nl=False)


def run(argv=None) -> int:
    """Invoke the CLI, mapping library errors to stable exit codes."""
    try:
        main.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Abort:
        return 1
    except click.UsageError as e:
        e.show()
        return 2
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except ConfigError as e:
        click.echo(f"configuration error: {e}", err=True)
        return 2
    except ProtocolError as e:
        click.echo(f"protocol error: {e}", err=True)
        return 3
    except CounterError as e:
        click.echo(f"counter error: {e}", err=True)
        return 4


def console_main() -> None:
    sys.exit(run())
