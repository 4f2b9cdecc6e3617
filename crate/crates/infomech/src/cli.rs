//! Command-line front end: experiment configuration, the four commands, and
//! their CSV outputs.
//!
//! Everything here is deterministic for a fixed configuration: the CSV
//! columns embed the alpha values exactly as given on the flag, floats are
//! written with shortest round-trip formatting, and no randomness enters
//! the pipeline.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::dist::TypeDistribution;
use crate::error::{Error, Result};
use crate::game::{GameSpec, Player};
use crate::mechanism::{
    self, closed_form_share_fn, joint_from_marginals, ActionProfileProbe, MarginalRule, RuleKind,
};
use crate::optimal::{self, WeightSpec};
use crate::payments::{self, optimal_payment_schedule, PaymentSchedule};
use crate::verify::{self, DiscreteInstance, MAX_GRID};

/// Optimal mechanisms for selling information to two competing buyers.
#[derive(Parser, Debug)]
#[command(name = "infomech", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Subcommand, Debug)]
pub enum CliCommand {
    /// Solve one configuration; print thresholds, regions, and aggregates.
    Solve(CommonArgs),
    /// CSV of interim share and payment versus type for the revenue mechanism.
    Curves(CommonArgs),
    /// CSV sweep over competition intensities: welfare and revenue columns.
    SweepAlpha(CommonArgs),
    /// Run the oracle suite; exits nonzero on any failed check.
    Verify(CommonArgs),
}

#[derive(Args, Debug)]
pub struct CommonArgs {
    /// Type distribution: `exp:RATE` or `uniform:LO,HI`.
    #[arg(long, default_value = "exp:1")]
    pub dist: String,

    /// Prior probability of state 1.
    #[arg(long, default_value_t = 0.5)]
    pub prior: f64,

    /// Competition intensities: comma list (`0.5,1,1.5`) or range (`0.1:1.5:0.1`).
    #[arg(long, default_value = "0.5")]
    pub alpha: String,

    /// Seller objective (defaults per command).
    #[arg(long, value_enum)]
    pub objective: Option<ObjectiveArg>,

    /// Grid size: curve rows, oracle grid edges, check resolutions.
    #[arg(long, default_value_t = 101)]
    pub grid: usize,

    /// Write CSV output here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Test-only fault injection for the verify command.
    #[arg(long, value_enum)]
    pub tamper: Option<TamperArg>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObjectiveArg {
    Welfare,
    Revenue,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TamperArg {
    /// Replace the mechanism's payments with zero everywhere.
    ZeroPayments,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    Welfare,
    Revenue,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tamper {
    None,
    ZeroPayments,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Solve,
    Curves,
    SweepAlpha,
    Verify,
}

/// One competition intensity, keeping the flag token for column naming.
#[derive(Clone, Debug)]
pub struct AlphaEntry {
    pub token: String,
    pub value: f64,
}

/// A fully validated experiment configuration.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub dist: TypeDistribution,
    pub prior: f64,
    pub alphas: Vec<AlphaEntry>,
    pub objective: Objective,
    pub grid: usize,
    pub out: Option<PathBuf>,
    pub tamper: Tamper,
    pub command: CommandKind,
}

impl ExperimentConfig {
    pub fn from_args(command: CommandKind, args: &CommonArgs) -> Result<Self> {
        let dist = parse_dist(&args.dist)?;
        let alphas = parse_alphas(&args.alpha)?;
        if alphas.is_empty() {
            return Err(Error::InvalidParameter("alpha list must be non-empty".into()));
        }
        for a in &alphas {
            if !a.value.is_finite() || a.value < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "alpha values must be finite and non-negative, got {}",
                    a.token
                )));
            }
        }
        if args.grid < 11 {
            return Err(Error::InvalidParameter(format!(
                "grid size must be at least 11, got {}",
                args.grid
            )));
        }
        let objective = match args.objective {
            Some(ObjectiveArg::Welfare) => Objective::Welfare,
            Some(ObjectiveArg::Revenue) => Objective::Revenue,
            Some(ObjectiveArg::Both) => Objective::Both,
            None => match command {
                CommandKind::Curves => Objective::Revenue,
                _ => Objective::Both,
            },
        };
        Ok(ExperimentConfig {
            dist,
            prior: args.prior,
            alphas,
            objective,
            grid: args.grid,
            out: args.out.clone(),
            tamper: match args.tamper {
                Some(TamperArg::ZeroPayments) => Tamper::ZeroPayments,
                None => Tamper::None,
            },
            command,
        })
    }

    fn game(&self, alpha: f64) -> Result<GameSpec> {
        GameSpec::new(alpha, self.prior, self.dist.clone())
    }
}

/// Parse `exp:RATE` or `uniform:LO,HI`.
pub fn parse_dist(s: &str) -> Result<TypeDistribution> {
    let (kind, params) = s
        .split_once(':')
        .ok_or_else(|| Error::InvalidParameter(format!("distribution spec `{s}` needs KIND:PARAMS")))?;
    match kind {
        "exp" => {
            let rate: f64 = params
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad exponential rate `{params}`")))?;
            TypeDistribution::exponential(rate)
        }
        "uniform" => {
            let (lo, hi) = params.split_once(',').ok_or_else(|| {
                Error::InvalidParameter(format!("uniform spec `{params}` needs LO,HI"))
            })?;
            let lo: f64 = lo
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad uniform bound `{lo}`")))?;
            let hi: f64 = hi
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad uniform bound `{hi}`")))?;
            TypeDistribution::uniform(lo, hi)
        }
        other => Err(Error::InvalidParameter(format!(
            "unknown distribution kind `{other}` (use exp or uniform)"
        ))),
    }
}

/// Parse a comma list of alphas, or a `lo:hi:step` range.
pub fn parse_alphas(s: &str) -> Result<Vec<AlphaEntry>> {
    let parse_one = |tok: &str| -> Result<f64> {
        tok.trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad alpha `{tok}`")))
    };
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidParameter(format!(
                "alpha range `{s}` needs LO:HI:STEP"
            )));
        }
        let (lo, hi, step) = (parse_one(parts[0])?, parse_one(parts[1])?, parse_one(parts[2])?);
        if step.is_nan() || step <= 0.0 {
            return Err(Error::InvalidParameter("alpha range step must be positive".into()));
        }
        let mut out = Vec::new();
        let mut k = 0u32;
        loop {
            // Round to counter step accumulation drift in the tokens.
            let value = ((lo + k as f64 * step) * 1e9).round() / 1e9;
            if value > hi + 0.5 * step {
                break;
            }
            out.push(AlphaEntry { token: format!("{value}"), value });
            k += 1;
        }
        Ok(out)
    } else {
        s.split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|tok| {
                Ok(AlphaEntry {
                    token: tok.trim().to_string(),
                    value: parse_one(tok)?,
                })
            })
            .collect()
    }
}

/// What a command produced: a human summary, an optional CSV payload, and
/// whether every check passed (drives the process exit code).
#[derive(Debug)]
pub struct CommandOutput {
    pub summary: String,
    pub csv: Option<String>,
    pub passed: bool,
}

/// Parse, dispatch, and write any CSV output to the configured path.
pub fn run_command(cli: &Cli) -> Result<CommandOutput> {
    let (kind, args) = match &cli.command {
        CliCommand::Solve(a) => (CommandKind::Solve, a),
        CliCommand::Curves(a) => (CommandKind::Curves, a),
        CliCommand::SweepAlpha(a) => (CommandKind::SweepAlpha, a),
        CliCommand::Verify(a) => (CommandKind::Verify, a),
    };
    let cfg = ExperimentConfig::from_args(kind, args)?;
    let mut output = match kind {
        CommandKind::Solve => cmd_solve(&cfg)?,
        CommandKind::Curves => cmd_curves(&cfg)?,
        CommandKind::SweepAlpha => cmd_sweep_alpha(&cfg)?,
        CommandKind::Verify => cmd_verify(&cfg)?,
    };
    if let (Some(path), Some(csv)) = (&cfg.out, &output.csv) {
        std::fs::write(path, csv).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let _ = writeln!(output.summary, "wrote {}", path.display());
        output.csv = None;
    }
    Ok(output)
}

fn fmt6(v: f64) -> String {
    format!("{v:.6}")
}

/// Compact region snapshot: the recommended pair at a 3x3 grid of quantile
/// type profiles, `R` for the state-matching action.
fn region_snapshot(rule: &MarginalRule, g: &GameSpec) -> Result<String> {
    let qs = [0.2, 0.5, 0.8];
    let mut out = String::new();
    let types: Vec<f64> = qs
        .iter()
        .map(|&q| g.dist().quantile(q))
        .collect::<Result<Vec<_>>>()?;
    let _ = writeln!(
        out,
        "  regions at type quantiles {qs:?} (rows v1, cols v2; R = matching action):"
    );
    for &v1 in &types {
        let cells: Vec<String> = types
            .iter()
            .map(|&v2| {
                let r1 = if rule.h(Player::One, v1, v2) > 0.5 { 'R' } else { 'W' };
                let r2 = if rule.h(Player::Two, v1, v2) > 0.5 { 'R' } else { 'W' };
                format!("{r1}{r2}")
            })
            .collect();
        let _ = writeln!(out, "    {}", cells.join(" "));
    }
    Ok(out)
}

fn cmd_solve(cfg: &ExperimentConfig) -> Result<CommandOutput> {
    if cfg.alphas.len() != 1 {
        return Err(Error::InvalidParameter(
            "solve expects a single alpha value".into(),
        ));
    }
    let alpha = cfg.alphas[0].value;
    let g = cfg.game(alpha)?;
    let d = g.dist();
    let vstar = g.obedience_threshold();
    let mut s = String::new();
    let _ = writeln!(s, "distribution: {d}");
    let _ = writeln!(
        s,
        "prior P[state=1] = {}   p_max = {}   alpha = {}",
        cfg.prior,
        g.p_max(),
        alpha
    );
    let _ = writeln!(s, "v*  (obedience threshold)    = {}", fmt6(vstar));
    let _ = writeln!(
        s,
        "K   (outside-option share)   = {}",
        fmt6(g.outside_option_share())
    );

    if matches!(cfg.objective, Objective::Welfare | Objective::Both) {
        let rule = optimal::welfare_rule(&g);
        let _ = writeln!(s, "-- welfare objective --");
        let saturated = (0..5).all(|k| {
            let v = d.support_lo() + (d.upper_bound() - d.support_lo()) * k as f64 / 4.0;
            rule.cutoff(Player::One, v).unwrap_or(0.0) >= d.upper_bound() - 1e-12
        });
        if saturated {
            let _ = writeln!(
                s,
                "cutoffs saturated at the support top: both players always receive the matching recommendation"
            );
        }
        let _ = write!(s, "{}", region_snapshot(&rule, &g)?);
        let second = payments::expected_welfare(&g, &rule)?;
        let first = payments::expected_welfare(&g, &optimal::first_best_welfare_rule(&g))?;
        let _ = writeln!(s, "welfare (second best) = {}", fmt6(second));
        let _ = writeln!(s, "welfare (first best)  = {}", fmt6(first));
        let _ = writeln!(
            s,
            "distorted type mass   = {} (closed form 2F(alpha v*) = {})",
            fmt6(optimal::distorted_type_mass(&g)),
            fmt6(2.0 * d.cdf(alpha * vstar)),
        );
    }

    if matches!(cfg.objective, Objective::Revenue | Objective::Both) {
        let rule = optimal::revenue_rule(&g)?;
        let v0 = d.inverse_virtual_value(0.0)?;
        let vtilde = d.inverse_virtual_value(alpha * d.virtual_value(vstar)?)?;
        let _ = writeln!(s, "-- revenue objective --");
        let _ = writeln!(s, "v0  (zero virtual value)     = {}", fmt6(v0));
        let _ = writeln!(s, "vt  (obedience binds below)  = {}", fmt6(vtilde));
        let _ = writeln!(
            s,
            "regime: {}",
            if vstar >= v0 { "v* >= v0" } else { "v* < v0" }
        );
        let _ = write!(s, "{}", region_snapshot(&rule, &g)?);
        let schedule = optimal_payment_schedule(RuleKind::Revenue, &g)?;
        let revenue = payments::expected_revenue(&g, &rule, &schedule)?;
        let _ = writeln!(s, "revenue (optimal mechanism) = {}", fmt6(revenue.value()));
        let _ = writeln!(
            s,
            "revenue identity check: direct = {}, virtual surplus = {}",
            fmt6(revenue.direct),
            fmt6(revenue.virtual_surplus)
        );
    }

    Ok(CommandOutput { summary: s, csv: None, passed: true })
}

fn cmd_curves(cfg: &ExperimentConfig) -> Result<CommandOutput> {
    if cfg.objective != Objective::Revenue {
        return Err(Error::InvalidParameter(
            "curves requires --objective revenue (the default for this command)".into(),
        ));
    }
    struct AlphaCurve {
        share: mechanism::InterimShare,
        schedule: PaymentSchedule,
    }
    let mut curves = Vec::new();
    for a in &cfg.alphas {
        let g = cfg.game(a.value)?;
        curves.push(AlphaCurve {
            share: closed_form_share_fn(RuleKind::Revenue, &g)?,
            schedule: optimal_payment_schedule(RuleKind::Revenue, &g)?,
        });
    }
    let lo = cfg.dist.support_lo();
    let top = cfg.dist.quantile(0.99)?;
    let rows = cfg.grid;
    let mut csv = String::from("value");
    for a in &cfg.alphas {
        let _ = write!(csv, ",share{}", a.token);
    }
    for a in &cfg.alphas {
        let _ = write!(csv, ",pay{}", a.token);
    }
    csv.push('\n');
    for r in 0..rows {
        let v = lo + (top - lo) * r as f64 / (rows - 1) as f64;
        let _ = write!(csv, "{v}");
        for c in &curves {
            let _ = write!(csv, ",{}", c.share.eval(v));
        }
        for c in &curves {
            let _ = write!(csv, ",{}", c.schedule.interim_payment(v));
        }
        csv.push('\n');
    }
    let summary = format!(
        "share/payment curves: {rows} rows, {} alpha column group(s), types in [{lo}, {top}]\n",
        cfg.alphas.len()
    );
    Ok(CommandOutput { summary, csv: Some(csv), passed: true })
}

fn cmd_sweep_alpha(cfg: &ExperimentConfig) -> Result<CommandOutput> {
    if cfg.objective != Objective::Both {
        return Err(Error::InvalidParameter(
            "sweep-alpha requires --objective both (the default for this command)".into(),
        ));
    }
    let rows: Vec<Result<String>> = cfg
        .alphas
        .par_iter()
        .map(|a| {
            let g = cfg.game(a.value)?;
            let first = payments::expected_welfare(&g, &optimal::first_best_welfare_rule(&g))?;
            let second = payments::expected_welfare(&g, &optimal::welfare_rule(&g))?;
            let rule = optimal::revenue_rule(&g)?;
            let schedule = optimal_payment_schedule(RuleKind::Revenue, &g)?;
            let revenue = payments::expected_revenue(&g, &rule, &schedule)?.value();
            Ok(format!("{},{first},{second},{revenue}\n", a.token))
        })
        .collect();
    let mut csv = String::from("alpha,firstbest,secondbest,revenue\n");
    for row in rows {
        csv.push_str(&row?);
    }
    let summary = format!("alpha sweep: {} rows\n", cfg.alphas.len());
    Ok(CommandOutput { summary, csv: Some(csv), passed: true })
}

struct CheckLine {
    name: &'static str,
    alpha: String,
    passed: bool,
    detail: String,
}

impl CheckLine {
    fn render(&self) -> String {
        format!(
            "{} {} alpha={} {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.alpha,
            self.detail
        )
    }
}

fn cmd_verify(cfg: &ExperimentConfig) -> Result<CommandOutput> {
    let results: Vec<Result<Vec<CheckLine>>> = cfg
        .alphas
        .par_iter()
        .map(|a| verify_one_alpha(cfg, a))
        .collect();
    let mut lines = Vec::new();
    for r in results {
        lines.extend(r?);
    }
    let failed: Vec<&CheckLine> = lines.iter().filter(|l| !l.passed).collect();
    let mut s = String::new();
    for line in &lines {
        let _ = writeln!(s, "{}", line.render());
    }
    if failed.is_empty() {
        let _ = writeln!(s, "VERIFY: all {} checks passed", lines.len());
    } else {
        let _ = writeln!(
            s,
            "VERIFY: {} of {} checks failed; worst: {}",
            failed.len(),
            lines.len(),
            failed[0].render()
        );
    }
    Ok(CommandOutput { summary: s, csv: None, passed: failed.is_empty() })
}

fn verify_one_alpha(cfg: &ExperimentConfig, a: &AlphaEntry) -> Result<Vec<CheckLine>> {
    let g = cfg.game(a.value)?;
    let mut lines = Vec::new();
    let check = |lines: &mut Vec<CheckLine>, name: &'static str, passed: bool, detail: String| {
        lines.push(CheckLine { name, alpha: a.token.clone(), passed, detail });
    };
    let obedience_grid = cfg.grid.min(1000);
    let lp_grid = cfg.grid.min(MAX_GRID);
    let dev_grid = cfg.grid.min(MAX_GRID);

    let include_revenue = matches!(cfg.objective, Objective::Revenue | Objective::Both);
    let include_welfare = matches!(cfg.objective, Objective::Welfare | Objective::Both);

    let mut kinds = Vec::new();
    if include_welfare {
        kinds.push((RuleKind::Welfare, optimal::welfare_rule(&g)));
    }
    if include_revenue {
        kinds.push((RuleKind::Revenue, optimal::revenue_rule(&g)?));
    }

    for (kind, rule) in &kinds {
        let label: &'static str = match kind {
            RuleKind::Welfare => "obedience-welfare",
            RuleKind::Revenue => "obedience-revenue",
        };
        let report = mechanism::is_obedient(rule, &g, obedience_grid)?;
        check(
            &mut lines,
            label,
            report.obedient,
            format!(
                "worst_margin={:e} at v={} ({})",
                report.worst_margin, report.worst_type, report.worst_player
            ),
        );
    }

    if include_revenue {
        // The unconstrained rule violates obedience exactly when its cutoff
        // drops below v* somewhere; the oracle must agree either way.
        let fb = optimal::first_best_revenue_rule(&g)?;
        let vstar = g.obedience_threshold();
        let cutoff_dips = (0..256).any(|k| {
            let v = g
                .dist()
                .quantile((k as f64 + 0.5) / 256.0)
                .expect("grid quantiles are valid");
            fb.cutoff(Player::One, v).unwrap_or(f64::NEG_INFINITY) < vstar - 1e-9
        });
        let report = mechanism::is_obedient(&fb, &g, obedience_grid)?;
        check(
            &mut lines,
            "obedience-flags-first-best",
            report.obedient != cutoff_dips,
            format!("worst_margin={:e} cutoff_dips_below_vstar={cutoff_dips}", report.worst_margin),
        );
    }

    for (kind, rule) in &kinds {
        let share = closed_form_share_fn(*kind, &g)?;
        let mono_label: &'static str = match kind {
            RuleKind::Welfare => "share-monotone-welfare",
            RuleKind::Revenue => "share-monotone-revenue",
        };
        let mut worst = f64::INFINITY;
        let mut prev = f64::NEG_INFINITY;
        for k in 0..obedience_grid {
            let v = g.dist().quantile((k as f64 + 0.5) / obedience_grid as f64)?;
            let val = share.eval(v);
            worst = worst.min(val - prev);
            prev = val;
        }
        check(&mut lines, mono_label, worst >= -1e-9, format!("min_increment={worst:e}"));

        let agree_label: &'static str = match kind {
            RuleKind::Welfare => "share-closed-vs-quadrature-welfare",
            RuleKind::Revenue => "share-closed-vs-quadrature-revenue",
        };
        let pts = obedience_grid.min(200);
        let mut max_diff: f64 = 0.0;
        for k in 0..pts {
            let v = g.dist().quantile((k as f64 + 0.5) / pts as f64)?;
            let q = mechanism::interim_share(rule, &g, Player::One, v)?;
            max_diff = max_diff.max((q - share.eval(v)).abs());
        }
        check(&mut lines, agree_label, max_diff <= 1e-6, format!("max_diff={max_diff:e}"));
    }

    for (kind, rule) in &kinds {
        let (label, weights): (&'static str, WeightSpec) = match kind {
            RuleKind::Welfare => ("lp-oracle-welfare", WeightSpec::welfare(g.alpha())),
            RuleKind::Revenue => ("lp-oracle-revenue", WeightSpec::virtual_surplus(&g)?),
        };
        let inst = DiscreteInstance::from_rule_cell_averaged(&g, lp_grid, rule)?;
        let optimum = verify::grid_optimize(&inst, &weights)?.objective(&weights);
        let closed = inst.objective(&weights);
        let gap = (optimum - closed).abs() / optimum.abs().max(closed.abs()).max(1e-12);
        check(
            &mut lines,
            label,
            gap <= 1e-3,
            format!("gap={gap:e} optimum={optimum} closed={closed} grid={lp_grid}"),
        );
    }

    for (kind, rule) in &kinds {
        let label: &'static str = match kind {
            RuleKind::Welfare => "double-deviation-welfare",
            RuleKind::Revenue => "double-deviation-revenue",
        };
        let report = match cfg.tamper {
            Tamper::None => verify::search_double_deviations_closed_form(&g, *kind, dev_grid)?,
            Tamper::ZeroPayments => {
                let inst = DiscreteInstance::from_rule_nodes(&g, dev_grid, rule)?;
                verify::search_double_deviations(&inst, &PaymentSchedule::zero())
            }
        };
        check(
            &mut lines,
            label,
            report.max_regret <= 1e-8,
            format!(
                "max_regret={:e} true_type={} report={} map={:?}",
                report.max_regret, report.true_type, report.reported_type, report.map
            ),
        );
    }

    if include_revenue {
        let rule = optimal::revenue_rule(&g)?;
        let schedule = optimal_payment_schedule(RuleKind::Revenue, &g)?;
        match payments::expected_revenue(&g, &rule, &schedule) {
            Ok(r) => check(
                &mut lines,
                "revenue-identity",
                true,
                format!("direct={} virtual={}", r.direct, r.virtual_surplus),
            ),
            Err(Error::RevenueMismatch { direct, virtual_surplus }) => check(
                &mut lines,
                "revenue-identity",
                false,
                format!("direct={direct} virtual={virtual_surplus}"),
            ),
            Err(e) => return Err(e),
        }

        let share = closed_form_share_fn(RuleKind::Revenue, &g)?;
        check(
            &mut lines,
            "individual-rationality",
            payments::check_individual_rationality(&g, &share, &schedule),
            String::new(),
        );

        // Joint realization from marginals at deterministic low-discrepancy
        // profiles: probabilities sum to one and reproduce the marginals.
        let joint = joint_from_marginals(&rule);
        let mut worst: f64 = 0.0;
        for k in 0..100 {
            let u1 = (0.5 + k as f64 * 0.618_033_988_749_894_9).fract();
            let u2 = (0.25 + k as f64 * 0.414_213_562_373_095_1).fract();
            let v1 = g.dist().quantile(u1)?;
            let v2 = g.dist().quantile(u2)?;
            let probe = ActionProfileProbe::evaluate(&joint, &rule, v1, v2, k % 2 == 1);
            worst = worst.max(probe.worst_defect);
        }
        check(
            &mut lines,
            "joint-realization",
            worst <= 1e-12,
            format!("worst_defect={worst:e}"),
        );
    }

    Ok(lines)
}
