//! `ddvv`: seeded verification campaigns and one-off checks for commutator
//! inequalities.
//!
//! Exit status is 0 when every check passes, 1 when a violation is found and
//! 2 for malformed input or configuration.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ddvv_core::bw::{bw_slack, bw_spectral_slack, t_operator};
use ddvv_core::campaign::{
    bw_campaign, ddvv_campaign, search_campaign, CampaignConfig, CampaignSummary, Execution, MAX_DIM,
};
use ddvv_core::curvature::{
    clifford_model, curvature_report, fundamental_report, veronese_tuple, CurvatureReport,
    FundamentalReport, SecondFundamentalForm,
};
use ddvv_core::ddvv::{
    canonical_reduce, copositive_oracle, copositive_property_k, ddvv_slack, CopositivityVerdict,
    SymmetricTuple,
};
use ddvv_core::io::{parse_form, parse_matrix, parse_pair, parse_tuple, to_json};
use ddvv_core::{Matrix, SlackReport};

#[derive(Parser, Debug)]
#[command(name = "ddvv", version, about = "Numerical checks of the DDVV and Böttcher–Wenzel inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(clap::Args, Debug, Clone)]
struct Common {
    /// Master seed; trial k uses seed ^ k.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of random trials (seeds for bw-search).
    #[arg(long, global = true, default_value_t = 1000)]
    trials: u64,
    /// Matrix dimension; drawn per trial when omitted.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Number of matrices in a tuple; drawn per trial when omitted.
    #[arg(long, global = true)]
    m: Option<usize>,
    /// Ambient curvature for generated models (default 1, the unit sphere).
    #[arg(long, global = true, allow_hyphen_values = true)]
    c: Option<f64>,
    /// Absolute tolerance replacing the default 1e-9·(1+|lhs|).
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Run campaigns on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Model {
    Clifford,
    Veronese,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// DDVV on random symmetric tuples, or on the tuple in --input.
    DdvvVerify,
    /// Commutator and spectral bounds on random pairs, or on the pair in
    /// --input ({"x": matrix, "y": matrix}).
    BwVerify,
    /// Alternating search for the largest ‖[X,Y]‖² over unit X, Y, one run
    /// per seed in seed..seed+trials.
    BwSearch {
        #[arg(long, default_value_t = 1000)]
        max_iters: usize,
    },
    /// Canonical form of the tuple in --input.
    Reduce,
    /// Copositivity of the symmetric matrix in --input.
    Copositive {
        /// Also run the simplex oracle at this lattice resolution (40 when
        /// given without a value).
        #[arg(long, num_args = 0..=1, default_missing_value = "40")]
        oracle: Option<usize>,
    },
    /// Curvature invariants of the second fundamental form in --input, or of
    /// a built-in model.
    Curvature {
        #[arg(long, value_enum)]
        model: Option<Model>,
        /// First sphere dimension of the Clifford model.
        #[arg(long, default_value_t = 1)]
        r: usize,
    },
    /// Writes the second fundamental form of a model (to --output) and its
    /// tuple (to --tuple-output).
    Models {
        #[arg(value_enum)]
        name: Model,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long)]
        tuple_output: Option<PathBuf>,
    },
    /// Eigenvalues of Y ↦ [Xᵀ,[X,Y]] for the X in --input.
    Spectrum,
}

/// Outcome of a command: what to print and whether every check passed.
struct Outcome {
    text: String,
    json: String,
    pass: bool,
}

impl Outcome {
    fn new<T: Serialize>(value: &T, text: String, pass: bool) -> Result<Self> {
        Ok(Outcome {
            text,
            json: to_json(value)?,
            pass,
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let body = match cli.common.format {
                Format::Text => outcome.text,
                Format::Json => outcome.json,
            };
            if let Err(e) = emit(cli.common.output.as_deref(), &body, &cli.command) {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            if outcome.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(output: Option<&Path>, body: &str, command: &Command) -> Result<()> {
    // `models` writes its own files
    if matches!(command, Command::Models { .. }) && output.is_some() {
        print!("{body}");
        return Ok(());
    }
    match output {
        Some(path) => fs::write(path, body).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let c = &cli.common;
    match &cli.command {
        Command::DdvvVerify => ddvv_verify(c),
        Command::BwVerify => bw_verify(c),
        Command::BwSearch { max_iters } => bw_search(c, *max_iters),
        Command::Reduce => reduce(c),
        Command::Copositive { oracle } => copositive(c, *oracle),
        Command::Curvature { model, r } => curvature(c, *model, *r),
        Command::Models { name, r, tuple_output } => models(c, *name, *r, tuple_output.as_deref()),
        Command::Spectrum => spectrum(c),
    }
}

fn read_input(c: &Common) -> Result<Option<String>> {
    c.input
        .as_ref()
        .map(|p| fs::read_to_string(p).with_context(|| format!("reading {}", p.display())))
        .transpose()
}

fn require_input(c: &Common, what: &str) -> Result<String> {
    read_input(c)?.with_context(|| format!("--input FILE with a {what} is required"))
}

fn config(c: &Common) -> CampaignConfig {
    let execution = if c.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    CampaignConfig::new(c.seed, c.trials)
        .with_dims(c.n, c.m)
        .with_tol(c.tol)
        .with_execution(execution)
}

fn summary_outcome(s: CampaignSummary, reports: &[SlackReport]) -> Result<Outcome> {
    eprintln!("{}: {} trials in {} ms", s.campaign, s.trials_run, s.wall_time_ms);
    let mut text = format!(
        "campaign     {}\nseed         {}\ntrials       {}\nviolations   {}\nmin_slack    {:e}\nargmin_seed  {}\ntolerance    {} {:e}\nversion      {}\n",
        s.campaign, s.seed, s.trials_run, s.violations, s.min_slack, s.argmin_seed, s.tol_mode, s.tol, s.version
    );
    for r in reports {
        text.push_str(&report_line(r));
    }
    text.push_str(if s.passed() { "PASS\n" } else { "FAIL\n" });
    let pass = s.passed();
    #[derive(Serialize)]
    struct Out<'a> {
        summary: &'a CampaignSummary,
        #[serde(skip_serializing_if = "<[_]>::is_empty")]
        reports: &'a [SlackReport],
    }
    Outcome::new(&Out { summary: &s, reports }, text, pass)
}

fn report_line(r: &SlackReport) -> String {
    format!(
        "{:<14} lhs {:e}  rhs {:e}  slack {:e}  {}\n",
        r.inequality_name,
        r.lhs,
        r.rhs,
        r.slack,
        if r.holds { "holds" } else { "VIOLATED" }
    )
}

fn ddvv_verify(c: &Common) -> Result<Outcome> {
    let cfg = config(c);
    match read_input(c)? {
        Some(text) => {
            let t = parse_tuple(&text)?;
            let reports = [ddvv_slack(&t)];
            summary_outcome(CampaignSummary::from_reports("ddvv", &cfg, &reports), &reports)
        }
        None => summary_outcome(ddvv_campaign(&cfg)?, &[]),
    }
}

fn bw_verify(c: &Common) -> Result<Outcome> {
    let cfg = config(c);
    match read_input(c)? {
        Some(text) => {
            let (x, y) = parse_pair(&text)?;
            let mut reports = vec![bw_slack(&x, &y)?];
            if x.norm() > 0.0 {
                reports.push(bw_spectral_slack(&x)?);
            }
            summary_outcome(CampaignSummary::from_reports("bw", &cfg, &reports), &reports)
        }
        None => summary_outcome(bw_campaign(&cfg)?, &[]),
    }
}

fn bw_search(c: &Common, max_iters: usize) -> Result<Outcome> {
    let n = c.n.unwrap_or(3);
    if n < 2 {
        bail!("bw-search needs --n >= 2");
    }
    let execution = if c.sequential { Execution::Sequential } else { Execution::default() };
    let s = search_campaign(n, c.seed, c.trials, max_iters, execution)?;
    let pass = s.best_ratio <= 2.0 + 1e-9;
    let trajectory: Vec<String> = s.best.trajectory.iter().map(|v| format!("{v:.12}")).collect();
    let text = format!(
        "n            {}\nseeds        {}..{}\nbest_ratio   {:.15}\nbest_seed    {}\nconverged    {}/{}\niterations   {}\ntrajectory   {}\n{}\n",
        s.n,
        c.seed,
        c.seed.wrapping_add(c.trials),
        s.best_ratio,
        s.best_seed,
        s.converged_runs,
        s.seeds,
        s.best.iterations,
        trajectory.join(" "),
        if pass { "PASS" } else { "FAIL" }
    );
    Outcome::new(&s, text, pass)
}

fn reduce(c: &Common) -> Result<Outcome> {
    let t = parse_tuple(&require_input(c, "tuple")?)?;
    let form = canonical_reduce(&t)?;
    let verified = form.verify(&t);
    let before = ddvv_slack(&t);
    let after = ddvv_slack(&form.tuple);
    #[derive(Serialize)]
    struct Out<'a> {
        canonical: &'a ddvv_core::ddvv::CanonicalForm,
        slack_before: &'a SlackReport,
        slack_after: &'a SlackReport,
        verified: bool,
    }
    let mut text = format!("degenerate   {}\n", form.degenerate);
    text.push_str(&format!("p\n{}q\n{}", matrix_text(&form.p), matrix_text(&form.q)));
    for (k, a) in form.tuple.matrices().iter().enumerate() {
        text.push_str(&format!("A_{}\n{}", k + 1, matrix_text(a)));
    }
    text.push_str(&report_line(&before));
    text.push_str(&report_line(&after));
    if let Err(e) = &verified {
        text.push_str(&format!("postcondition failed: {e}\n"));
    }
    Outcome::new(
        &Out {
            canonical: &form,
            slack_before: &before,
            slack_after: &after,
            verified: verified.is_ok(),
        },
        text,
        verified.is_ok(),
    )
}

fn matrix_text(a: &Matrix) -> String {
    a.rows()
        .iter()
        .map(|row| {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>12.8}")).collect();
            format!("  {}\n", cells.join(" "))
        })
        .collect()
}

fn copositive(c: &Common, oracle: Option<usize>) -> Result<Outcome> {
    let p = parse_matrix(&require_input(c, "matrix")?)?;
    let k = copositive_property_k(&p)?;
    let o = oracle.map(|res| copositive_oracle(&p, res)).transpose()?;
    let agree = o.as_ref().is_none_or(|o| o.copositive == k.copositive);
    #[derive(Serialize)]
    struct Out<'a> {
        property_k: &'a CopositivityVerdict,
        #[serde(skip_serializing_if = "Option::is_none")]
        oracle: Option<&'a CopositivityVerdict>,
        agree: bool,
    }
    let mut text = verdict_text("property K", &k);
    if let Some(o) = &o {
        text.push_str(&verdict_text("oracle", o));
        text.push_str(if agree { "verdicts agree\n" } else { "VERDICTS DISAGREE\n" });
    }
    Outcome::new(&Out { property_k: &k, oracle: o.as_ref(), agree }, text, agree)
}

fn verdict_text(label: &str, v: &CopositivityVerdict) -> String {
    let mut s = format!(
        "{label:<12} {}\n",
        if v.copositive { "copositive" } else { "not copositive" }
    );
    if let Some(x) = &v.certificate {
        let cells: Vec<String> = x.iter().map(|c| format!("{c:.12}")).collect();
        s.push_str(&format!("  certificate  {}\n", cells.join(" ")));
    }
    if let Some(idx) = &v.failing_submatrix {
        s.push_str(&format!("  submatrix    {idx:?}\n"));
    }
    if let Some(min) = v.simplex_min {
        s.push_str(&format!("  simplex_min  {min:e}\n"));
    }
    s
}

fn model_form(c: &Common, model: Model, r: usize) -> Result<SecondFundamentalForm> {
    let h = match model {
        Model::Clifford => clifford_model(r, c.n.unwrap_or(2))?,
        Model::Veronese => veronese_tuple(),
    };
    Ok(match c.c {
        Some(curv) => SecondFundamentalForm::new(h.n(), curv, h.slices().to_vec())?,
        None => h,
    })
}

fn curvature(c: &Common, model: Option<Model>, r: usize) -> Result<Outcome> {
    let h = match (model, read_input(c)?) {
        (Some(_), Some(_)) => bail!("give either --model or --input, not both"),
        (Some(m), None) => model_form(c, m, r)?,
        (None, Some(text)) => parse_form(&text)?,
        (None, None) => bail!("--input FILE or --model is required"),
    };
    let cr = curvature_report(&h)?;
    let fr = fundamental_report(&h)?;
    #[derive(Serialize)]
    struct Out<'a> {
        curvature: &'a CurvatureReport,
        fundamental: &'a FundamentalReport,
    }
    let eig: Vec<String> = fr.eigenvalues.iter().map(|v| format!("{v:.15}")).collect();
    let text = format!(
        "n, m, c          {}, {}, {}\nrho              {:.15}\nrho_perp         {:.15}\n|H|^2            {:.15}\ngeometric_slack  {:e}\nshape_slack      {:e}\nsigma_sq         {:.15}\neigenvalues      {}\npinch            {:.15} ({} n = {})\n{}\n",
        h.n(),
        h.m(),
        h.c(),
        cr.rho,
        cr.rho_perp,
        cr.mean_curv_sq,
        cr.geometric_slack,
        cr.shape_slack,
        fr.sigma_sq,
        eig.join(" "),
        fr.pinch,
        if fr.within_pinching_bound { "<=" } else { ">" },
        h.n(),
        if cr.holds { "PASS" } else { "FAIL" }
    );
    Outcome::new(&Out { curvature: &cr, fundamental: &fr }, text, cr.holds)
}

fn models(c: &Common, model: Model, r: usize, tuple_output: Option<&Path>) -> Result<Outcome> {
    let h = model_form(c, model, r)?;
    let h_json = to_json(&h)?;
    let tuple: SymmetricTuple = h.to_tuple();
    let tuple_json = to_json(&tuple)?;
    let mut text = String::new();
    if let Some(path) = &c.output {
        fs::write(path, &h_json).with_context(|| format!("writing {}", path.display()))?;
        text.push_str(&format!("wrote {}\n", path.display()));
    }
    if let Some(path) = tuple_output {
        fs::write(path, &tuple_json).with_context(|| format!("writing {}", path.display()))?;
        text.push_str(&format!("wrote {}\n", path.display()));
    }
    if c.output.is_none() {
        // nothing written for the form: print it
        return Ok(Outcome {
            text: h_json.clone(),
            json: h_json,
            pass: true,
        });
    }
    Ok(Outcome {
        json: text.clone(),
        text,
        pass: true,
    })
}

fn spectrum(c: &Common) -> Result<Outcome> {
    let x = parse_matrix(&require_input(c, "matrix")?)?;
    if x.n() > MAX_DIM {
        bail!("n = {} exceeds the cap of {MAX_DIM}", x.n());
    }
    let values = t_operator(&x)?.spectrum()?;
    let report = SlackReport::upper_bound("bw_spectral", values[0], 2.0);
    let report = match c.tol {
        Some(t) => report.with_tol(t),
        None => report,
    };
    #[derive(Serialize)]
    struct Out<'a> {
        eigenvalues: &'a [f64],
        bound: &'a SlackReport,
    }
    let cells: Vec<String> = values.iter().map(|v| format!("{v:.15}")).collect();
    let text = format!("eigenvalues  {}\n{}", cells.join(" "), report_line(&report));
    Outcome::new(&Out { eigenvalues: &values, bound: &report }, text, report.holds)
}
