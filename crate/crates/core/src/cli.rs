//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 input error, 3 internal
//! invariant failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::arch::{CouplingGraph, HAMILTONIAN_LIMIT};
use crate::circuit::{
    fidelity_report, random_cnot_circuit, segment_and_synthesize, verify_circuits, Circuit,
    CircuitError,
};
use crate::mapping::{kqpimo, Mapping, TabuConfig};
use crate::rng::{stream_id, substream};
use crate::synth::{lcnns_with_mapping, verify_equivalence};

#[derive(Debug)]
pub enum CliError {
    Mismatch(String),
    Input(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Mismatch(_) => 1,
            CliError::Input(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Mismatch(m) | CliError::Input(m) | CliError::Internal(m) => m,
        }
    }
}

/// Errors from the library: malformed input is the caller's fault,
/// anything raised after inputs validated is an internal failure.
fn classify(e: CircuitError) -> CliError {
    match e {
        CircuitError::Synth(_) | CircuitError::Verification(_) => CliError::Internal(e.to_string()),
        other => CliError::Input(other.to_string()),
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "cnot-synth",
    version,
    about = "Noise-aware nearest-neighbor CNOT circuit synthesis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct TabuArgs {
    /// Seed for placement search and Monte-Carlo sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Tabu table length (candidates per iteration).
    #[arg(long, default_value_t = 20)]
    tabu_len: usize,
    /// Tabu search iterations.
    #[arg(long, default_value_t = 50)]
    iterations: usize,
}

impl TabuArgs {
    fn config(&self) -> CliResult<TabuConfig> {
        if self.tabu_len == 0 {
            return Err(CliError::Input("--tabu-len must be at least 1".into()));
        }
        Ok(TabuConfig {
            tabu_len: self.tabu_len,
            iterations: self.iterations,
            seed: self.seed,
        })
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Describe a coupling graph: edges, cut points, key qubits, Hamiltonian path.
    Arch {
        /// Built-in name (quito, guadalupe, linear(5), ...) or file path.
        name: Option<String>,
        #[arg(long = "arch")]
        arch: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Synthesize a circuit for a device.
    Synth {
        input: PathBuf,
        #[arg(long)]
        arch: String,
        #[command(flatten)]
        tabu: TabuArgs,
        /// Monte-Carlo shots (0 reports ESP only).
        #[arg(long, default_value_t = 0)]
        shots: u64,
        /// Single-qubit gate error; defaults to the device's calibration value.
        #[arg(long)]
        one_q_error: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Write QASM here; metrics then go to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the logical-to-physical placement (JSON) here.
        #[arg(long)]
        mapping: Option<PathBuf>,
    },
    /// Check a synthesized circuit against the original through a placement.
    Verify {
        original: PathBuf,
        synthesized: PathBuf,
        #[arg(long)]
        mapping: PathBuf,
        /// Also require every CNOT to be a coupling-graph edge.
        #[arg(long)]
        arch: Option<String>,
    },
    /// Synthesize seeded random circuits and report metrics.
    Bench {
        #[arg(long, value_delimiter = ',', required = true)]
        arch: Vec<String>,
        /// Input gate counts.
        #[arg(long, value_delimiter = ',', default_value = "10,50,100,1000")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        instances: usize,
        #[command(flatten)]
        tabu: TabuArgs,
        #[arg(long, default_value_t = 0)]
        shots: u64,
        #[arg(long)]
        one_q_error: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Leave the wall-clock column empty so output is reproducible.
        #[arg(long)]
        no_timing: bool,
    },
    /// ESP and Monte-Carlo fidelity of a circuit already on device qubits.
    Fidelity {
        input: PathBuf,
        #[arg(long)]
        arch: String,
        #[arg(long, default_value_t = 10_000)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        one_q_error: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Arch { name, arch, format } => match name.or(arch) {
            Some(n) => cmd_arch(&n, format, stdout),
            None => Err(CliError::Input("missing architecture name".into())),
        },
        Command::Synth {
            input,
            arch,
            tabu,
            shots,
            one_q_error,
            format,
            out,
            mapping,
        } => tabu.config().and_then(|config| {
            cmd_synth(
                &SynthArgs {
                    input: &input,
                    arch: &arch,
                    config,
                    shots,
                    one_q_error,
                    format,
                    out: out.as_deref(),
                    mapping: mapping.as_deref(),
                },
                stdout,
                stderr,
            )
        }),
        Command::Verify {
            original,
            synthesized,
            mapping,
            arch,
        } => cmd_verify(&original, &synthesized, &mapping, arch.as_deref(), stdout),
        Command::Bench {
            arch,
            sizes,
            instances,
            tabu,
            shots,
            one_q_error,
            format,
            out,
            no_timing,
        } => tabu.config().and_then(|config| {
            cmd_bench(
                &BenchArgs {
                    archs: &arch,
                    sizes: &sizes,
                    instances,
                    config,
                    shots,
                    one_q_error,
                    format,
                    out: out.as_deref(),
                    timing: !no_timing,
                },
                stdout,
            )
        }),
        Command::Fidelity {
            input,
            arch,
            shots,
            seed,
            one_q_error,
            format,
        } => cmd_fidelity(&input, &arch, shots, seed, one_q_error, format, stdout),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.exit_code()
        }
    }
}

/// Built-in name first, then a file path.
pub fn load_arch(name: &str) -> CliResult<CouplingGraph> {
    if let Ok(g) = CouplingGraph::builtin(name) {
        return Ok(g);
    }
    let path = Path::new(name);
    if !path.exists() {
        return Err(CliError::Input(format!(
            "'{name}' is neither a built-in architecture nor a readable file"
        )));
    }
    let text = read(path)?;
    CouplingGraph::parse(&text).map_err(|e| CliError::Input(format!("{name}: {e}")))
}

fn load_connected(name: &str) -> CliResult<CouplingGraph> {
    let g = load_arch(name)?;
    if !g.is_connected() {
        return Err(CliError::Input(format!(
            "{name}: coupling graph is not connected"
        )));
    }
    Ok(g)
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Internal(format!("write failed: {e}")))
}

fn load_circuit(path: &Path) -> CliResult<Circuit> {
    let text = read(path)?;
    Circuit::parse_qasm(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn join(set: impl IntoIterator<Item = usize>) -> String {
    set.into_iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Serialize)]
struct ArchReport {
    name: Option<String>,
    qubits: usize,
    edges: Vec<(usize, usize, f64)>,
    connected: bool,
    cut_points: Option<Vec<usize>>,
    key_qubits: Option<Vec<usize>>,
    hamiltonian_path: Option<Vec<usize>>,
    hamiltonian_checked: bool,
}

fn cmd_arch(spec: &str, format: Format, out: &mut dyn Write) -> CliResult<()> {
    let g = load_arch(spec)?;
    let connected = g.is_connected();
    let cut: Option<Vec<usize>> = g
        .articulation_points()
        .ok()
        .map(|s| s.into_iter().collect());
    let keys: Option<Vec<usize>> = g.key_qubits().ok().map(|s| s.into_iter().collect());
    let ham = g.hamiltonian_path();
    let report = ArchReport {
        name: g.name().map(str::to_string),
        qubits: g.vertex_count(),
        edges: g.edges(),
        connected,
        cut_points: cut,
        key_qubits: keys,
        hamiltonian_checked: ham.is_ok(),
        hamiltonian_path: ham.ok().flatten(),
    };
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        Format::Csv => {
            let mut s = String::from("u,v,error\n");
            for (u, v, e) in &report.edges {
                writeln!(s, "{u},{v},{e:e}").unwrap();
            }
            s
        }
        Format::Table => {
            let mut s = String::new();
            writeln!(s, "name: {}", report.name.as_deref().unwrap_or("-")).unwrap();
            writeln!(s, "qubits: {}", report.qubits).unwrap();
            writeln!(s, "edges: {}", report.edges.len()).unwrap();
            for (u, v, e) in &report.edges {
                writeln!(s, "  {u}-{v}  {e:e}").unwrap();
            }
            writeln!(s, "connected: {}", if connected { "yes" } else { "no" }).unwrap();
            if let (Some(c), Some(k)) = (&report.cut_points, &report.key_qubits) {
                writeln!(s, "cut points: {{{}}}", join(c.iter().copied())).unwrap();
                writeln!(s, "key qubits: {{{}}}", join(k.iter().copied())).unwrap();
            }
            let ham = match (&report.hamiltonian_path, report.hamiltonian_checked) {
                (Some(p), _) => format!("yes ({})", join(p.iter().copied())),
                (None, true) => "no".to_string(),
                (None, false) => format!("not checked (more than {HAMILTONIAN_LIMIT} qubits)"),
            };
            writeln!(s, "hamiltonian: {ham}").unwrap();
            s
        }
    };
    emit(out, &text)
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MappingFile {
    pub arch: Option<String>,
    pub physical_qubits: usize,
    pub assign: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
struct Metrics {
    arch: String,
    n: usize,
    input_gates: usize,
    cnot: usize,
    depth: usize,
    esp: f64,
    mc_fidelity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ms: Option<f64>,
}

const HEADER: &str = "arch,n,input_gates,cnot,depth,esp,mc_fidelity,ms";

fn opt(v: Option<f64>, digits: usize) -> String {
    v.map_or(String::new(), |x| format!("{x:.digits$}"))
}

impl Metrics {
    fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{:.6},{},{}",
            self.arch,
            self.n,
            self.input_gates,
            self.cnot,
            self.depth,
            self.esp,
            opt(self.mc_fidelity, 6),
            opt(self.ms, 3)
        )
    }
}

fn render_table(header: &str, rows: &[Vec<String>]) -> String {
    let cols: Vec<&str> = header.split(',').collect();
    let mut width: Vec<usize> = cols.iter().map(|c| c.len()).collect();
    for r in rows {
        for (w, cell) in width.iter_mut().zip(r) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .zip(&width)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
            + "\n"
    };
    let mut s = line(cols.clone());
    for r in rows {
        s += &line(r.iter().map(String::as_str).collect());
    }
    s
}

fn render_metrics(rows: &[Metrics], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(rows).expect("metrics serialize") + "\n",
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
            w.write_record(HEADER.split(',')).expect("in-memory write");
            for r in rows {
                w.write_record(r.csv_row().split(','))
                    .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
        }
        Format::Table => {
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| r.csv_row().split(',').map(str::to_string).collect())
                .collect();
            render_table(HEADER, &cells)
        }
    }
}

struct SynthArgs<'a> {
    input: &'a Path,
    arch: &'a str,
    config: TabuConfig,
    shots: u64,
    one_q_error: Option<f64>,
    format: Format,
    out: Option<&'a Path>,
    mapping: Option<&'a Path>,
}

fn check_one_q(e: Option<f64>, g: &CouplingGraph) -> CliResult<f64> {
    match e {
        Some(e) if !(0.0..1.0).contains(&e) => Err(CliError::Input(format!(
            "--one-q-error {e} is outside [0,1)"
        ))),
        Some(e) => Ok(e),
        None => Ok(g.default_one_qubit_error()),
    }
}

fn arch_label(spec: &str, g: &CouplingGraph) -> String {
    g.name().unwrap_or(spec).to_string()
}

fn cmd_synth(a: &SynthArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let g = load_connected(a.arch)?;
    let one_q = check_one_q(a.one_q_error, &g)?;
    let circuit = load_circuit(a.input)?;
    let seg = segment_and_synthesize(&circuit, &g, &a.config).map_err(classify)?;
    verify_circuits(&circuit, &seg.circuit, &seg.mapping, Some(&g))
        .map_err(|m| CliError::Internal(format!("synthesized circuit failed verification: {m}")))?;

    let shots = if seg.circuit.is_cnot_only() {
        a.shots
    } else {
        0
    };
    if shots != a.shots {
        let _ = writeln!(
            stderr,
            "note: Monte-Carlo estimate needs a CNOT-only circuit; reporting ESP only"
        );
    }
    let report =
        fidelity_report(&seg.circuit, &g, one_q, shots, a.config.seed).map_err(classify)?;
    let metrics = Metrics {
        arch: arch_label(a.arch, &g),
        n: circuit.n(),
        input_gates: circuit.len(),
        cnot: seg.circuit.cnot_count(),
        depth: seg.circuit.depth(),
        esp: report.esp,
        mc_fidelity: report.mc_fidelity,
        ms: None,
    };

    if let Some(path) = a.mapping {
        let file = MappingFile {
            arch: g.name().map(str::to_string),
            physical_qubits: g.num_qubits(),
            assign: seg.mapping.assign().to_vec(),
        };
        write_file(
            path,
            &(serde_json::to_string_pretty(&file).expect("mapping serializes") + "\n"),
        )?;
    }
    let qasm = seg.circuit.to_qasm();
    let report = render_metrics(std::slice::from_ref(&metrics), a.format);
    match a.out {
        Some(path) => {
            write_file(path, &qasm)?;
            emit(stdout, &report)
        }
        None => {
            emit(stdout, &qasm)?;
            emit(stderr, &report)
        }
    }
}

fn cmd_verify(
    original: &Path,
    synthesized: &Path,
    mapping: &Path,
    arch: Option<&str>,
    out: &mut dyn Write,
) -> CliResult<()> {
    let orig = load_circuit(original)?;
    let synth = load_circuit(synthesized)?;
    let text = read(mapping)?;
    let file: MappingFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", mapping.display())))?;
    let map = Mapping::new(file.assign)
        .map_err(|e| CliError::Input(format!("{}: {e}", mapping.display())))?;
    let g = arch.map(load_arch).transpose()?;
    match verify_circuits(&orig, &synth, &map, g.as_ref()) {
        Ok(()) => emit(out, "equivalent\n"),
        Err(m) => Err(CliError::Mismatch(format!("not equivalent: {m}"))),
    }
}

struct BenchArgs<'a> {
    archs: &'a [String],
    sizes: &'a [usize],
    instances: usize,
    config: TabuConfig,
    shots: u64,
    one_q_error: Option<f64>,
    format: Format,
    out: Option<&'a Path>,
    timing: bool,
}

/// Seed of benchmark circuit `k` with `size` gates on architecture `a`.
pub fn bench_circuit_seed(seed: u64, arch_index: usize, size: usize, k: usize) -> u64 {
    let mut rng = substream(seed, stream_id(size as u64, k as u64));
    rng.next_u64() ^ (arch_index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (sum, count) = xs.fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    if count == 0 {
        0.0
    } else {
        sum / count as f64
    }
}

fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> CliResult<()> {
    let graphs: Vec<CouplingGraph> = a
        .archs
        .iter()
        .map(|s| load_connected(s))
        .collect::<CliResult<_>>()?;
    let mut rows: Vec<Metrics> = Vec::new();
    let mut cells: Vec<Vec<String>> = Vec::new();
    for (ai, (spec, g)) in a.archs.iter().zip(&graphs).enumerate() {
        let n = g.vertex_count();
        if n < 2 {
            return Err(CliError::Input(format!("{spec}: need at least 2 qubits")));
        }
        let one_q = check_one_q(a.one_q_error, g)?;
        let label = arch_label(spec, g);
        let mapping =
            kqpimo(g, n, &a.config).map_err(|e| CliError::Input(format!("{spec}: {e}")))?;
        for &size in a.sizes {
            let mut group = Vec::with_capacity(a.instances);
            for k in 0..a.instances {
                let circuit =
                    random_cnot_circuit(n, size, bench_circuit_seed(a.config.seed, ai, size, k))
                        .map_err(classify)?;
                let matrix = circuit.parity_matrix().map_err(classify)?;
                let start = Instant::now();
                let result = lcnns_with_mapping(&matrix, g, &mapping)
                    .map_err(|e| CliError::Internal(e.to_string()))?;
                let ms = start.elapsed().as_secs_f64() * 1e3;
                verify_equivalence(&matrix, &result, g).map_err(|m| {
                    CliError::Internal(format!("instance {k} of size {size} on {label}: {m}"))
                })?;
                let physical =
                    Circuit::from_cnots(g.num_qubits(), &result.gates).map_err(classify)?;
                let report =
                    fidelity_report(&physical, g, one_q, a.shots, a.config.seed ^ k as u64)
                        .map_err(classify)?;
                group.push(Metrics {
                    arch: label.clone(),
                    n,
                    input_gates: size,
                    cnot: result.cnot_count,
                    depth: result.depth,
                    esp: report.esp,
                    mc_fidelity: report.mc_fidelity,
                    ms: a.timing.then_some(ms),
                });
            }
            for m in &group {
                cells.push(m.csv_row().split(',').map(str::to_string).collect());
            }
            if !group.is_empty() {
                let mc = (a.shots > 0).then(|| mean(group.iter().filter_map(|m| m.mc_fidelity)));
                let ms = a.timing.then(|| mean(group.iter().filter_map(|m| m.ms)));
                cells.push(vec![
                    format!("{label}:mean"),
                    n.to_string(),
                    size.to_string(),
                    format!("{:.2}", mean(group.iter().map(|m| m.cnot as f64))),
                    format!("{:.2}", mean(group.iter().map(|m| m.depth as f64))),
                    format!("{:.6}", mean(group.iter().map(|m| m.esp))),
                    opt(mc, 6),
                    opt(ms, 3),
                ]);
            }
            rows.extend(group);
        }
    }
    let text = match a.format {
        Format::Json => serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n",
        Format::Table => render_table(HEADER, &cells),
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
            w.write_record(HEADER.split(',')).expect("in-memory write");
            for c in &cells {
                w.write_record(c).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
        }
    };
    match a.out {
        Some(path) => write_file(path, &text),
        None => emit(out, &text),
    }
}

#[derive(Serialize)]
struct FidelityOut {
    arch: String,
    gates: usize,
    esp: f64,
    mc_fidelity: Option<f64>,
    shots: u64,
    seed: u64,
}

fn cmd_fidelity(
    input: &Path,
    arch: &str,
    shots: u64,
    seed: u64,
    one_q_error: Option<f64>,
    format: Format,
    out: &mut dyn Write,
) -> CliResult<()> {
    let g = load_arch(arch)?;
    let one_q = check_one_q(one_q_error, &g)?;
    let circuit = load_circuit(input)?;
    if circuit.n() > g.num_qubits() {
        return Err(CliError::Input(format!(
            "circuit uses {} qubits but {arch} has {}",
            circuit.n(),
            g.num_qubits()
        )));
    }
    let shots = if circuit.is_cnot_only() { shots } else { 0 };
    let r = fidelity_report(&circuit, &g, one_q, shots, seed).map_err(classify)?;
    let o = FidelityOut {
        arch: arch_label(arch, &g),
        gates: circuit.len(),
        esp: r.esp,
        mc_fidelity: r.mc_fidelity,
        shots: r.shots,
        seed,
    };
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&o).expect("serializes") + "\n",
        Format::Csv => format!(
            "arch,gates,esp,mc_fidelity,shots,seed\n{},{},{:.6},{},{},{}\n",
            o.arch,
            o.gates,
            o.esp,
            opt(o.mc_fidelity, 6),
            o.shots,
            o.seed
        ),
        Format::Table => {
            let mut s = format!("arch: {}\ngates: {}\nesp: {:.6}\n", o.arch, o.gates, o.esp);
            match o.mc_fidelity {
                Some(f) => writeln!(s, "mc_fidelity: {f:.6} ({} shots, seed {})", o.shots, seed),
                None => writeln!(s, "mc_fidelity: -"),
            }
            .unwrap();
            s
        }
    };
    emit(out, &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("cnot-synth").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn arch_quito() {
        let (code, out, _) = run_str(&["arch", "quito"]);
        assert_eq!(code, 0);
        assert!(out.contains("key qubits: {0, 2, 4}"));
        assert!(out.contains("cut points: {1, 3}"));
        assert!(out.contains("hamiltonian: no"));
    }

    #[test]
    fn arch_linear_has_path() {
        let (code, out, _) = run_str(&["arch", "linear(5)"]);
        assert_eq!(code, 0);
        assert!(out.contains("hamiltonian: yes"));
    }

    #[test]
    fn arch_missing_file() {
        let (code, _, err) = run_str(&["arch", "missing.txt"]);
        assert_eq!(code, 2);
        assert!(err.contains("missing.txt"));
    }

    #[test]
    fn bad_flags_are_input_errors() {
        assert_eq!(run_str(&["synth"]).0, 2);
        assert_eq!(run_str(&["frobnicate"]).0, 2);
        assert_eq!(run_str(&["--help"]).0, 0);
    }

    #[test]
    fn bench_small_csv() {
        let (code, out, _) = run_str(&[
            "bench",
            "--arch",
            "quito",
            "--sizes",
            "10",
            "--instances",
            "1",
            "--iterations",
            "2",
            "--no-timing",
        ]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], HEADER);
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("quito,5,10,"));
        assert!(lines[2].starts_with("quito:mean,5,10,"));
        assert!(lines[1].ends_with(",,"));
    }
}
