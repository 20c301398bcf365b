use serde_json::{json, Value};

/// Columns and fields of every output file, per subcommand.
pub fn schema() -> Value {
    let records = json!({
        "shell": "dyadic shell k of the first frequency, 2^{k-1} < |xi| <= 2^k",
        "signs": "sign pattern of the modulation",
        "frequencies": "interacting frequencies as (x,y) pairs",
        "phase": "modulation value",
        "weight": "normalizing weight",
        "normalized_gap": "|phase| / weight",
        "near_resonance": "phase was re-evaluated in extended precision",
        "in_regime": "four-wave regime flag (empty for three-wave records)"
    });
    let shells = json!({
        "shell": "dyadic shell k",
        "min_normalized_gap": "smallest normalized gap in the shell",
        "evaluations": "tuples evaluated in the shell"
    });
    let conservation = json!({
        "dt": "uniform time step",
        "steps": "steps taken",
        "t_final": "time reached",
        "l2_initial": "L2 norm of the initial data",
        "max_relative_l2_drift": "max |‖U(t)‖ - ‖U(0)‖| / ‖U(0)‖",
        "hn_initial": "H^N norm of the initial data",
        "max_hn_growth": "max ‖U(t)‖_{H^N} / ‖U(0)‖_{H^N}",
        "doubling_time": "first time the H^N norm exceeded twice its initial value",
        "courant_dt": "automatic step for the initial data",
        "aborted": "abort reason, if any"
    });
    json!({
        "scan3": {
            "records.csv": records,
            "shells.csv": shells,
            "summary.json": {
                "min_normalized_gap": "smallest normalized gap",
                "argmin": "record attaining it",
                "evaluations": "tuples evaluated",
                "near_resonances": "tuples re-evaluated in extended precision",
                "weight": "normalization used"
            }
        },
        "scan4": {
            "records.csv": records,
            "shells.csv": shells,
            "summary.json": {
                "min_normalized_gap": "empirical b', smallest normalized gap",
                "min_in_regime": "smallest gap among tuples in the regime",
                "argmin": "record attaining the minimum",
                "evaluations": "tuples evaluated",
                "excluded_trivial": "diagonal tuples skipped",
                "near_resonances": "tuples re-evaluated in extended precision"
            }
        },
        "collinear": {
            "collinear.csv": {
                "eta_x": "first coordinate of the interior lattice point",
                "eta_y": "second coordinate",
                "gap": "|Lambda(xi)/|xi| - Lambda(eta)/|eta||",
                "normalized_gap": "gap * |xi|^6"
            }
        },
        "lemma1": {
            "profile.json": {
                "f_at_zero": "F(0)",
                "root": "root of F on [0, inf), if F(0) <= 0",
                "interval": "{x in (0,B) : |F(x)| < delta} as (lo, hi)",
                "length": "hi - lo, or 0",
                "length_bound": "20 delta sqrt(a + B)",
                "forced_empty": "the crude estimate already excludes the band"
            }
        },
        "measure": {
            "measure.csv": {
                "j": "dyadic index of the threshold 2^-j K",
                "total": "summed length of the exceptional intervals",
                "contributing_pairs": "pairs with a nonempty interval",
                "pairs_scanned": "admissible pairs enumerated",
                "ratio_to_previous": "total(j) / total(j-1)"
            }
        },
        "paradiff-audit": {
            "audit.json": {
                "composition": "per case: orders, expected slope l1+l2-2, per-band residual ratios and fitted log2 slope",
                "adjoint_defect": "|<T_a f, h> - <f, T_a h>| for a real order-0 symbol",
                "conjugation_defect": "relative L2 norm of conj(T_a f) - T_{a'} conj f",
                "paralin_symmetry_defect": "relative L2 norm of H(f,g) - H(g,f)"
            }
        },
        "symbols": {
            "expansions.json": {
                "eps": "amplitudes",
                "entries": "per expansion: name, order, remainder symbol norms and eps slope",
                "chi_exponent": "paraproduct cutoff exponent"
            },
            "good_variable.json": {
                "eps": "amplitudes",
                "entries": "U - linear part, H - Re U, Psi - Im U in H^n with eps slopes",
                "chi_exponent": "paraproduct cutoff exponent"
            }
        },
        "simulate": {
            "trajectory.jsonl": {
                "t": "time",
                "l2": "L2 norm",
                "hn": "H^N norm",
                "doubled": "the H^N norm has doubled by this time"
            },
            "report.json": conservation,
            "final_state.csv": {
                "xi1": "first frequency coordinate",
                "xi2": "second frequency coordinate",
                "re": "real part of the Fourier coefficient",
                "im": "imaginary part"
            }
        },
        "sweep": {
            "sweep.csv": {
                "epsilon": "amplitude",
                "doubling_time": "doubling time, or t_end when censored",
                "censored": "no doubling before t_end",
                "steps": "steps taken",
                "aborted": "abort reason, if any",
                "footer": "# p_fit=<p> p_interval=[lo,hi], p = -slope of log T against log epsilon"
            },
            "report.json": {
                "rows": "as in sweep.csv",
                "p_fit": "fitted exponent",
                "p_interval": "95% t-interval of the exponent",
                "any_censored": "some run did not double",
                "monotone": "doubling times are non-increasing in epsilon",
                "spans_decade": "largest over smallest epsilon is at least 10"
            }
        },
        "energy-audit": {
            "report.json": conservation,
            "audit.csv": {
                "t": "snapshot time",
                "E_N": "‖<grad>^N U‖^2",
                "dE_dt_fd": "five-point finite difference of E_N",
                "dE_dt_trilinear": "trilinear rate with the constant c",
                "hiMod": "rate from |Phi| > 1",
                "loMod_hiFreq": "rate from |Phi| <= 1, |xi| > 2^D",
                "loMod_loFreq": "rate from |Phi| <= 1, |xi| <= 2^D",
                "D": "frequency split",
                "N": "Sobolev index"
            },
            "audit.json": {
                "c": "energy constant 1/(32 pi^4)",
                "cadence": "snapshot spacing",
                "accumulated": "time integrals of the three parts",
                "max_relative_mismatch": "max |fd - trilinear| / max |trilinear|",
                "max_pointwise_mismatch": "max |fd - trilinear| / |trilinear|"
            }
        },
        "manifest.json": {
            "config": "resolved settings; config.toml holds the same values",
            "knobs": "numerical choices in effect",
            "outputs": "file, size and sha256 of every output",
            "status": "ok or aborted",
            "abort_reason": "why the run stopped early"
        }
    })
}
