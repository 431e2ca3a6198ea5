use std::fmt::{self, Display};
use std::fs;
use std::path::Path;

use rsvp_core::compilers::Formula;
use rsvp_core::compilers::{self, CompileError};
use rsvp_core::costmodel::CamState;
use rsvp_core::costmodel::{self, CostError, CostParams, CostReport};
use rsvp_core::diagram::{self, DiagramError};
use rsvp_core::wordset::{parse_word_set, WordSetError};
use rsvp_core::{BitString, EngineError, Gate, LockSense, Program, WordArray};

use crate::report::Report;

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_WIDTH: i32 = 3;
pub const EXIT_LIMIT: i32 = 4;
pub const EXIT_INTERNAL: i32 = 1;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn with_context(code: i32, context: &str, err: impl Display) -> Self {
        CliError {
            code,
            message: format!("{context}: {err}"),
        }
    }
}

impl Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

pub type CliResult = Result<Report, CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::with_context(EXIT_INPUT, &path.display().to_string(), e))
}

fn load_program(path: &Path) -> Result<Program, CliError> {
    diagram::parse(&read(path)?)
        .map_err(|e: DiagramError| CliError::with_context(EXIT_INPUT, &path.display().to_string(), e))
}

fn load_words(path: &Path) -> Result<WordArray, CliError> {
    parse_word_set(&read(path)?)
        .map_err(|e: WordSetError| CliError::with_context(EXIT_INPUT, &path.display().to_string(), e))
}

fn load_formula(path: &Path) -> Result<Formula, CliError> {
    read(path)?
        .parse::<Formula>()
        .map_err(|e| CliError::with_context(EXIT_INPUT, &path.display().to_string(), e))
}

fn compile_err(e: CompileError) -> CliError {
    CliError::input(e.to_string())
}

fn engine_err(e: EngineError) -> CliError {
    CliError::input(e.to_string())
}

fn patterns_line(array: &WordArray) -> String {
    array.patterns().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
}

fn operand_text(program: &Program, index: usize) -> String {
    program
        .name_of(index)
        .map_or_else(|| index.to_string(), str::to_string)
}

fn gate_text(program: &Program, gate: &Gate) -> String {
    let list = |set: &std::collections::BTreeSet<usize>| {
        set.iter()
            .rev()
            .map(|&i| operand_text(program, i))
            .collect::<Vec<_>>()
            .join(",")
    };
    if gate.is_unconditional() {
        format!("not {}", list(&gate.targets))
    } else {
        format!("toggle {} when {}", list(&gate.targets), list(&gate.controls))
    }
}

fn word_entry(index: usize, bits: &BitString, payload: Option<u64>) -> String {
    match payload {
        Some(id) => format!("{index} {bits} {id}"),
        None => format!("{index} {bits}"),
    }
}

fn word_line(index: usize, bits: &BitString, payload: Option<u64>) -> String {
    match payload {
        Some(id) => format!("  [{index}] {bits}  payload {id}"),
        None => format!("  [{index}] {bits}"),
    }
}

fn resolve_operand(program: &Program, operand: &str) -> Result<usize, CliError> {
    let index = program
        .resolve(operand)
        .ok_or_else(|| CliError::input(format!("unknown bit {operand:?}")))?;
    if index >= program.width {
        return Err(CliError::input(format!(
            "bit {operand:?} is outside width {}",
            program.width
        )));
    }
    Ok(index)
}

pub struct RunOptions<'a> {
    pub flag: Option<&'a str>,
    pub trace: bool,
    pub verify_locks: bool,
    pub lock: Option<&'a str>,
}

pub fn cmd_run(program_path: &Path, words_path: &Path, opts: &RunOptions) -> CliResult {
    let program = load_program(program_path)?;
    let mut words = load_words(words_path)?;
    if program.width != words.width() {
        return Err(CliError {
            code: EXIT_WIDTH,
            message: format!(
                "program width {} does not match word width {}",
                program.width,
                words.width()
            ),
        });
    }
    let flag = opts.flag.map(|f| resolve_operand(&program, f)).transpose()?;
    words.set_verify_locks(opts.verify_locks);
    if let Some(spec) = opts.lock {
        let bits = spec
            .split(',')
            .map(|s| resolve_operand(&program, s.trim()))
            .collect::<Result<Vec<_>, _>>()?;
        words.lock_where(bits, LockSense::Match).map_err(engine_err)?;
    }

    let mut r = Report::default();
    r.fact("width", program.width).fact("gates", program.len());
    r.line(format!("program: {} gates, width {}", program.len(), program.width));
    r.fact("locked", words.locked_count());
    r.line(format!("locked words: {}", words.locked_count()));

    let mut trace = Vec::new();
    words
        .apply_program_traced(&program, |i, a| {
            if opts.trace {
                trace.push((i + 1, gate_text(&program, &program.gates[i]), patterns_line(a)));
            }
        })
        .map_err(engine_err)?;
    for (step, gate, state) in &trace {
        r.fact("trace", format!("{step}: {state}"));
        r.line(format!("step {step}: {state}  [{gate}]"));
    }

    r.line("final words:");
    for (i, w) in words.words().iter().enumerate() {
        r.fact("word", word_entry(i, w.bits(), w.payload()));
        r.line(word_line(i, w.bits(), w.payload()));
    }

    if let Some(bit) = flag {
        let hits = words.locate_flags(bit).map_err(engine_err)?;
        r.fact("flag_bit", bit);
        r.fact("flagged_count", hits.len());
        r.line(format!("flag bit: {} ({bit})", operand_text(&program, bit)));
        if hits.is_empty() {
            r.line("flagged: none");
        }
        for &i in &hits {
            r.fact("flagged", i);
            r.line(format!("flagged: word {i} (pattern {})", words.word(i).bits()));
        }
    }

    let c = words.counters();
    r.fact("steps", c.steps)
        .fact("bus_activations", c.bus_activations)
        .fact("toggles", c.toggles)
        .fact("locked_savings", c.locked_savings);
    r.line(format!(
        "counters: steps {} bus_activations {} toggles {} locked_savings {}",
        c.steps, c.bus_activations, c.toggles, c.locked_savings
    ));
    Ok(r)
}

pub fn parse_index_list(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| CliError::input(format!("invalid bit index {:?}", s.trim())))
        })
        .collect()
}

/// Copies `array` with one extra zero bit above the existing ones.
fn with_top_flag(array: &WordArray) -> Result<WordArray, CliError> {
    let width = array.width() + 1;
    let entries = array
        .words()
        .iter()
        .map(|w| (BitString::from_indices(width, w.bits().ones()), w.payload()))
        .collect::<Vec<_>>();
    WordArray::with_payloads(entries, width).map_err(engine_err)
}

pub fn cmd_search(words_path: &Path, query: &str, key_bits: Option<&[usize]>, flag: Option<usize>) -> CliResult {
    let original = load_words(words_path)?;
    let (mut words, flag) = match flag {
        Some(f) => {
            if f >= original.width() {
                return Err(CliError::input(format!(
                    "flag bit {f} is outside width {}",
                    original.width()
                )));
            }
            (original.clone(), f)
        }
        None => (with_top_flag(&original)?, original.width()),
    };
    if let Some(i) = words.read_flags(flag).map_err(engine_err)?.iter().position(|&b| b) {
        return Err(CliError::input(format!("word {i} already has flag bit {flag} set")));
    }
    let key_bits: Vec<usize> = match key_bits {
        Some(k) => k.to_vec(),
        None => (0..original.width()).rev().filter(|&i| i != flag).collect(),
    };
    if let Some(&bad) = key_bits.iter().find(|&&k| k >= original.width()) {
        return Err(CliError::input(format!(
            "key bit {bad} is outside width {}",
            original.width()
        )));
    }
    let program = compilers::compile_keyword(query, &key_bits, flag).map_err(compile_err)?;
    words.apply_program(&program).map_err(engine_err)?;
    let hits = words.locate_flags(flag).map_err(engine_err)?;

    let mut r = Report::default();
    let keys = key_bits.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",");
    r.fact("query", query).fact("key_bits", &keys).fact("flag", flag);
    r.line(format!("query {query} on key bits {keys}, flag bit {flag}"));
    r.fact("steps", words.counters().steps);
    r.line(format!("steps: {}", words.counters().steps));
    r.fact("matches", hits.len());
    if hits.is_empty() {
        r.line("no match");
    }
    for &i in &hits {
        let w = original.word(i);
        r.fact("match", word_entry(i, w.bits(), w.payload()));
        match w.payload() {
            Some(id) => r.line(format!("match: word {i} (pattern {}, payload {id})", w.bits())),
            None => r.line(format!("match: word {i} (pattern {})", w.bits())),
        };
    }
    Ok(r)
}

fn resolve_vars(formula: &Formula, vars: Option<usize>, max_vars: usize) -> Result<usize, CliError> {
    let n = vars.unwrap_or_else(|| formula.variables().len());
    if n == 0 {
        return Err(CliError::input("at least one variable is required"));
    }
    if n > max_vars {
        return Err(CliError {
            code: EXIT_LIMIT,
            message: format!("{n} variables exceeds the limit of {max_vars} (see --max-vars)"),
        });
    }
    Ok(n)
}

fn address_string(addr: usize, n: usize) -> String {
    (0..n)
        .rev()
        .map(|b| if (addr >> b) & 1 == 1 { '1' } else { '0' })
        .collect()
}

fn table_string(table: &[bool]) -> String {
    table.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn cmd_sat(formula_path: &Path, vars: Option<usize>, max_vars: usize, check: bool) -> CliResult {
    let formula = load_formula(formula_path)?;
    let n = resolve_vars(&formula, vars, max_vars)?;
    let run = compilers::run_on_count(&formula, n).map_err(compile_err)?;
    let solutions = run.solutions();
    let names = formula.variables();

    let mut r = Report::default();
    r.fact("vars", n);
    r.line(format!("variables: {n}, most significant first: {}", names.join(" ")));
    for v in &names {
        r.fact("variable", v);
    }
    let steps = run.array.counters().steps;
    let trials = 1u64 << n;
    r.fact("steps", steps).fact("trials", trials);
    r.line(format!("gate steps: {steps} (brute force: {trials} trials)"));
    r.fact("satisfiable", !solutions.is_empty());
    r.fact("solution_count", solutions.len());
    if solutions.is_empty() {
        r.line("UNSAT");
    } else {
        r.line(format!("solutions: {}", solutions.len()));
    }
    for &a in &solutions {
        let s = address_string(a, n);
        r.fact("solution", &s);
        r.line(format!("  {s}"));
    }
    if check {
        let oracle = compilers::brute_force_table(&formula, n).map_err(compile_err)?;
        if oracle != run.table {
            let at = oracle.iter().zip(&run.table).position(|(a, b)| a != b).unwrap_or(0);
            return Err(CliError {
                code: EXIT_INTERNAL,
                message: format!("engine and oracle disagree at {}", address_string(at, n)),
            });
        }
        r.fact("check", "agree");
        r.line(format!("check: engine and oracle agree on all {trials} assignments"));
    }
    Ok(r)
}

fn parse_table(text: &str) -> Result<Vec<bool>, CliError> {
    text.chars()
        .filter(|c| !c.is_whitespace())
        .enumerate()
        .map(|(i, c)| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(CliError::input(format!("table entry {} is {c:?}, expected 0 or 1", i + 1))),
        })
        .collect()
}

pub enum GpSource<'a> {
    Formula {
        path: &'a Path,
        vars: Option<usize>,
        max_vars: usize,
    },
    Table(&'a Path),
}

pub fn cmd_gp(source: GpSource) -> CliResult {
    let table = match source {
        GpSource::Formula { path, vars, max_vars } => {
            let formula = load_formula(path)?;
            let n = resolve_vars(&formula, vars, max_vars)?;
            compilers::run_on_count(&formula, n).map_err(compile_err)?.table
        }
        GpSource::Table(path) => parse_table(&read(path)?)?,
    };
    let gp = compilers::gp_analyze(&table).map_err(compile_err)?;

    let mut r = Report::default();
    let t = table_string(&table);
    r.fact("vars", gp.variables()).fact("table", &t);
    r.line(format!("variables: {}", gp.variables()));
    r.line(format!("truth table: {t}"));
    r.fact("balance", gp.balance);
    r.line(format!("balance: {}", gp.balance));
    r.fact("antisymmetry_code", &gp.antisymmetry_code);
    r.line(format!("antisymmetry code: {}", gp.antisymmetry_code));
    r.fact("symmetry_code", &gp.symmetry_code);
    r.line(format!("symmetry code: {}", gp.symmetry_code));
    for p in &gp.periods {
        r.fact("period", p);
    }
    if gp.periods.is_empty() {
        r.line("periods: none");
    } else {
        let list = gp.periods.iter().map(|p| p.to_string()).collect::<Vec<_>>();
        r.line(format!("periods: {}", list.join(", ")));
    }
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum PowerBase {
    #[value(name = "2")]
    Two,
    #[value(name = "e")]
    E,
}

pub struct CostOptions {
    pub n: u32,
    pub words: Option<u64>,
    pub controls: u32,
    pub delta1: f64,
    pub delta2: f64,
    pub p1: f64,
    pub p2: f64,
    pub lock_fraction: f64,
    pub power_base: PowerBase,
    pub empirical: bool,
    pub max_vars: usize,
}

fn cost_err(e: CostError) -> CliError {
    CliError::input(e.to_string())
}

fn cost_facts(r: &mut Report, prefix: &str, c: &CostReport<f64>) {
    let rows = [
        ("match_fraction", c.match_fraction),
        ("cam_time", c.cam_time),
        ("rsvp_time", c.rsvp_time),
        ("cam_power", c.cam_power),
        ("rsvp_power", c.rsvp_power),
        ("cam_pdp", c.cam_pdp),
        ("rsvp_pdp", c.rsvp_pdp),
        ("time_ratio", c.time_ratio),
        ("power_ratio", c.power_ratio),
        ("pdp_ratio", c.pdp_ratio),
    ];
    for (k, v) in rows {
        r.fact(&format!("{prefix}{k}"), v);
        r.line(format!("  {:<16}{v}", k.replace('_', " ")));
    }
}

pub fn cmd_cost(o: &CostOptions) -> CliResult {
    if o.controls > o.n + 1 {
        return Err(CliError::input(format!(
            "{} controls exceed the {} bits of a row",
            o.controls,
            o.n + 1
        )));
    }
    let words = match o.words {
        Some(0) => return Err(CliError::input("--L must be positive")),
        Some(l) => l,
        None if o.n < 63 => 1u64 << (o.n + 1),
        None => return Err(CliError::input("--L is required when n exceeds 62")),
    };
    let params = CostParams::new(o.delta1, o.delta2, o.p1, o.p2).map_err(cost_err)?;
    let f = 0.5f64.powi(o.controls as i32);
    let report = match o.power_base {
        PowerBase::Two => costmodel::compare_with_fraction(&params, f, o.n, words, &o.lock_fraction),
        PowerBase::E => costmodel::compare_literal_e(&params, f, o.n, words, o.lock_fraction),
    }
    .map_err(cost_err)?;

    let mut r = Report::default();
    let base = match o.power_base {
        PowerBase::Two => "2",
        PowerBase::E => "e",
    };
    r.fact("n", o.n)
        .fact("L", words)
        .fact("controls", o.controls)
        .fact("lock_fraction", o.lock_fraction)
        .fact("power_base", base);
    r.line(format!(
        "n {} (row width {}), L {words}, controls {}, lock fraction {}, power base {base}",
        o.n,
        o.n + 1,
        o.controls,
        o.lock_fraction
    ));
    r.line("analytic:");
    cost_facts(&mut r, "", &report);
    if o.empirical {
        empirical(&mut r, o, &params)?;
    }
    Ok(r)
}

/// Runs one controlled NOT on the full `(n+1)`-bit count in both machines and
/// compares their counters with the formulas.
fn empirical(r: &mut Report, o: &CostOptions, params: &CostParams<f64>) -> Result<(), CliError> {
    if o.controls > o.n {
        return Err(CliError::input("--empirical needs controls <= n so bit 0 can be the target"));
    }
    if o.n as usize + 1 > o.max_vars {
        return Err(CliError {
            code: EXIT_LIMIT,
            message: format!(
                "--empirical with n {} materializes 2^{} rows, over the limit of 2^{} (see --max-vars)",
                o.n,
                o.n + 1,
                o.max_vars
            ),
        });
    }
    let width = o.n as usize + 1;
    let gate = Gate::new((width - o.controls as usize)..width, [0]).map_err(engine_err)?;
    let mut array = WordArray::binary_count(width, 0).map_err(engine_err)?;
    let mut cam = CamState::from_array(&array);
    let rows = array.len() as u64;
    let f: f64 = costmodel::match_fraction(&gate, width).map_err(engine_err)?;

    cam.controlled_not(&gate).map_err(engine_err)?;
    array.apply_gate(&gate).map_err(engine_err)?;
    let agree = cam.rows().iter().eq(array.patterns());

    let cc = cam.counters();
    let ec = array.counters();
    let expected_matches = f * rows as f64;
    let cam_time = cam.elapsed_time(params);
    let cam_time_formula = costmodel::cam_time(params, &f, o.n);
    let cam_power = cam.consumed_power(params);
    let cam_power_formula = costmodel::cam_power(params, &f, o.n, rows);
    let rsvp_time = ec.steps as f64 * costmodel::rsvp_time(params);
    let rsvp_time_formula = costmodel::rsvp_time(params);

    r.line(format!("empirical (full count of {rows} rows, one controlled NOT on bit 0):"));
    let rows_out: [(&str, String); 13] = [
        ("rows", rows.to_string()),
        ("multi_reads", cc.multi_reads.to_string()),
        ("expected_matches", expected_matches.to_string()),
        ("match_delta", (cc.multi_reads as f64 - expected_matches).to_string()),
        ("bus_activations", ec.bus_activations.to_string()),
        ("cam_time", cam_time.to_string()),
        ("cam_time_formula", cam_time_formula.to_string()),
        ("cam_time_delta", (cam_time - cam_time_formula).to_string()),
        ("rsvp_time", rsvp_time.to_string()),
        ("rsvp_time_delta", (rsvp_time - rsvp_time_formula).to_string()),
        ("cam_power", cam_power.to_string()),
        ("cam_power_formula", cam_power_formula.to_string()),
        ("cam_power_delta", (cam_power - cam_power_formula).to_string()),
    ];
    for (k, v) in rows_out {
        r.fact(&format!("empirical.{k}"), &v);
        r.line(format!("  {:<20}{v}", k.replace('_', " ")));
    }
    r.fact("empirical.rows_agree", agree);
    r.line(format!("  {:<20}{agree}", "rows agree"));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn address_strings_are_msb_first() {
        assert_eq!(address_string(1, 2), "01");
        assert_eq!(address_string(6, 3), "110");
    }

    #[test]
    fn tables_ignore_whitespace() {
        assert_eq!(parse_table("01\n 10\n").unwrap(), [false, true, true, false]);
        assert_eq!(parse_table("0a").unwrap_err().code, EXIT_INPUT);
    }

    #[test]
    fn index_lists() {
        assert_eq!(parse_index_list("2, 1,0").unwrap(), [2, 1, 0]);
        assert!(parse_index_list("1,x").is_err());
    }

    #[test]
    fn top_flag_keeps_bits_and_payloads() {
        let a = parse_word_set("01 4\n10\n").unwrap();
        let b = with_top_flag(&a).unwrap();
        assert_eq!(b.width(), 3);
        assert_eq!(b.word(0).bits().to_string(), "001");
        assert_eq!(b.word(0).payload(), Some(4));
        assert_eq!(b.word(1).bits().to_string(), "010");
    }

    #[test]
    fn gate_text_uses_names() {
        let p = diagram::parse("width 3\nbit Num1 2\nbit f 0\ntoggle f when Num1,1\n").unwrap();
        assert_eq!(gate_text(&p, &p.gates[0]), "toggle f when Num1,1");
    }
}
