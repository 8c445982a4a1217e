//! Batch command-line front end.
//!
//! Inputs are section files: a header `[name]` followed by one item per
//! line (items may also follow the header on the same line, separated by
//! `;`). Blank lines and `#` comments are ignored. Output is line records
//! with stable tags.

use std::collections::HashMap;
use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::SeedableRng;

use crate::collector::{collect, collect_restricted, CollectionResult};
use crate::commutator::parse_element;
use crate::constructions::{
    is_admissible, ru_construction, u_construction, z_construction, OrderedAlphabet,
};
use crate::error::{Error, Result};
use crate::factor_basis::{
    adapt_basis_free, adapt_basis_torsion, free_factor_basis, torsion_factor_basis, verify_adapted,
    verify_factor_basis, FactorSpec, Verification,
};
use crate::lattice::{abelian_structure, smith_normal_form, IntMatrix};
use crate::lcs::{
    adapt_relators_weight1, parse_relator_product, r_basic_weight2, r_normal_form, residual,
    verify_hall_like, Presentation,
};
use crate::multiplicator::{
    schur_bases, t_generators, w_generators, FinitePresentation, Permutation,
};
use crate::nilpotent::{basic_commutators, class2_normal_form, format_basic};
use crate::subgroup::{fold_words, nielsen_reduce, same_subgroup, GenTuple};
use crate::word::{Alphabet, Word};

#[derive(Parser, Debug)]
#[command(
    name = "freefactor",
    version,
    about = "Free bases of factors of free groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Input {
    /// Section file (`-` reads standard input).
    pub file: Option<PathBuf>,
    /// Extra input word (repeatable); appended to the `[words]` section.
    #[arg(long = "word", allow_hyphen_values = true)]
    pub words: Vec<String>,
    /// Run oracle cross-checks and report them as `CHECK` records.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SchurPart {
    Bases,
    TGens,
    WGens,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Freely reduce words.
    Reduce(Input),
    /// Enumerate the U-construction on `[A]`, `[B]`.
    UGen {
        #[command(flatten)]
        io: Input,
        #[arg(long, default_value_t = 3)]
        max_weight: usize,
    },
    /// Enumerate the Z-construction on `[A]`, `[B]`.
    ZGen {
        #[command(flatten)]
        io: Input,
        #[arg(long, default_value_t = 2)]
        max_conjugators: usize,
    },
    /// Restricted construction on `[A1]`, `[gamma]`, `[A2]`, `[B]`.
    RuGen {
        #[command(flatten)]
        io: Input,
        #[arg(long)]
        max_weight: Option<usize>,
    },
    /// Collect `[words]` over `[A]`, `[B]`.
    Collect {
        #[command(flatten)]
        io: Input,
        #[arg(long)]
        emit_dictionary: bool,
    },
    /// Collect `[words]` over `[A1]`, `[gamma]`, `[A2]`, `[B]`.
    CollectRestricted {
        #[command(flatten)]
        io: Input,
        /// Pseudo-orders, overriding `[gamma]`.
        #[arg(long, value_delimiter = ',')]
        gamma: Vec<u32>,
        #[arg(long)]
        emit_dictionary: bool,
    },
    /// Adapt a free basis to the factor given by `[rank]`, `[lattice]`.
    AdaptBasis {
        #[command(flatten)]
        io: Input,
        #[arg(long, conflicts_with = "torsion")]
        free: bool,
        #[arg(long)]
        torsion: bool,
    },
    /// Free basis of the subgroup given by `[rank]`, `[lattice]`.
    FactorBasis {
        #[command(flatten)]
        io: Input,
        #[arg(long, default_value_t = 3)]
        max_weight: usize,
    },
    /// Fold `[subgroup]` into its Stallings graph.
    Fold(Input),
    /// Membership of `[words]` in the subgroup generated by `[subgroup]`.
    Member(Input),
    /// Nielsen-reduce `[subgroup]`.
    Nielsen(Input),
    /// Compare `[subgroup]` with `[subgroup2]`.
    SameSubgroup(Input),
    /// Smith normal form of `[matrix]`.
    Snf(Input),
    /// Adapt `[relators]` so that `w_i ≡ x_i^{d_i}` modulo commutators.
    LcsAdapt(Input),
    /// Relative basic commutators of weights 1 and 2.
    Rbasic {
        #[command(flatten)]
        io: Input,
        /// Random samples for the unique-expression check (with `--verify`).
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Expressions of `[elements]` (products of conjugated relators).
    Rnf(Input),
    /// Generating sets related to the Schur multiplicator.
    Schur {
        #[arg(value_enum)]
        part: SchurPart,
        #[command(flatten)]
        io: Input,
        #[arg(long, default_value_t = 2)]
        max_weight: usize,
        /// Build the R′ side on `W1` instead of `W2`.
        #[arg(long)]
        r_prime_on_w1: bool,
    },
}

/// Parsed section file.
#[derive(Clone, Debug, Default)]
pub struct Sections {
    items: HashMap<String, Vec<String>>,
}

impl Sections {
    pub fn parse(text: &str) -> Result<Self> {
        let mut items: HashMap<String, Vec<String>> = HashMap::new();
        let mut current: Option<String> = None;
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let close = rest.find(']').ok_or_else(|| {
                    Error::Parse(format!("line {}: unclosed section header", no + 1))
                })?;
                let name = rest[..close].trim().to_ascii_lowercase();
                let entry = items.entry(name.clone()).or_default();
                for it in rest[close + 1..]
                    .split(';')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                {
                    entry.push(it.to_string());
                }
                current = Some(name);
            } else {
                let name = current.as_ref().ok_or_else(|| {
                    Error::Parse(format!("line {}: item outside any section", no + 1))
                })?;
                items
                    .get_mut(name)
                    .expect("section exists")
                    .push(line.to_string());
            }
        }
        Ok(Sections { items })
    }

    pub fn get(&self, name: &str) -> &[String] {
        self.items.get(name).map_or(&[], Vec::as_slice)
    }

    pub fn has(&self, name: &str) -> bool {
        self.items.contains_key(name)
    }

    /// Items of a section, each split on whitespace and commas.
    pub fn names(&self, name: &str) -> Vec<String> {
        self.get(name)
            .iter()
            .flat_map(|l| l.split(|c: char| c == ',' || c.is_whitespace()))
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .collect()
    }

    pub fn single_usize(&self, name: &str) -> Result<Option<usize>> {
        match self.get(name) {
            [] => Ok(None),
            [v] => v
                .parse()
                .map(Some)
                .map_err(|_| Error::Parse(format!("[{name}] expects a number, found `{v}`"))),
            _ => Err(Error::Parse(format!("[{name}] expects a single value"))),
        }
    }

    pub fn matrix(&self, name: &str, cols: Option<usize>) -> Result<IntMatrix> {
        let rows: Vec<Vec<i64>> = self
            .get(name)
            .iter()
            .map(|l| {
                l.split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(|t| {
                        t.parse::<i64>()
                            .map_err(|_| Error::Parse(format!("[{name}]: bad integer `{t}`")))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let cols = match (cols, rows.first()) {
            (Some(c), _) => c,
            (None, Some(r)) => r.len(),
            (None, None) => 0,
        };
        IntMatrix::from_i64_rows(&rows, cols).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Accumulated output records and check outcomes.
#[derive(Default)]
struct Report {
    lines: Vec<String>,
    failed: bool,
}

impl Report {
    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn check(&mut self, name: &str, ok: bool) {
        self.line(format!("CHECK {name} {}", if ok { "ok" } else { "FAIL" }));
        self.failed |= !ok;
    }

    fn verification(&mut self, name: &str, v: &Verification) {
        self.check(name, v.ok());
        for f in &v.failures {
            self.line(format!("CHECK-DETAIL {f}"));
        }
    }
}

fn read_sections(io: &Input) -> Result<Sections> {
    let text = match &io.file {
        None => String::new(),
        Some(p) if p.as_os_str() == "-" => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Error::Parse(format!("stdin: {e}")))?;
            s
        }
        Some(p) => {
            std::fs::read_to_string(p).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?
        }
    };
    let mut s = Sections::parse(&text)?;
    if !io.words.is_empty() {
        s.items
            .entry("words".into())
            .or_default()
            .extend(io.words.iter().cloned());
    }
    Ok(s)
}

/// `[gens]` names, or `x1..xn` from `[rank]`.
fn base_alphabet(s: &Sections) -> Result<Alphabet> {
    if s.has("gens") {
        return Alphabet::new(s.names("gens"));
    }
    if s.has("a") || s.has("b") {
        return Alphabet::new([s.names("a"), s.names("b")].concat());
    }
    let n = s
        .single_usize("rank")?
        .ok_or_else(|| Error::Parse("missing [rank] or [gens]".into()))?;
    Ok(Alphabet::standard(n))
}

fn words_of(alphabet: &Alphabet, items: &[String]) -> Result<Vec<Word>> {
    items.iter().map(|w| parse_element(alphabet, w)).collect()
}

fn plain_alphabet(s: &Sections) -> Result<OrderedAlphabet> {
    let a = s.names("a");
    let b = s.names("b");
    let a: Vec<&str> = a.iter().map(String::as_str).collect();
    let b: Vec<&str> = b.iter().map(String::as_str).collect();
    OrderedAlphabet::plain(&a, &b)
}

fn restricted_alphabet(s: &Sections, gamma_override: &[u32]) -> Result<OrderedAlphabet> {
    let a1 = s.names("a1");
    let a2 = s.names("a2");
    let b = s.names("b");
    let gammas: Vec<u32> = if gamma_override.is_empty() {
        s.names("gamma")
            .iter()
            .map(|g| {
                g.parse()
                    .map_err(|_| Error::Parse(format!("[gamma]: bad value `{g}`")))
            })
            .collect::<Result<_>>()?
    } else {
        gamma_override.to_vec()
    };
    fn v(x: &[String]) -> Vec<&str> {
        x.iter().map(String::as_str).collect()
    }
    OrderedAlphabet::partitioned(&v(&a1), &gammas, &v(&a2), &v(&b))
}

fn presentation(s: &Sections) -> Result<Presentation> {
    let alphabet = base_alphabet(s)?;
    let rels = words_of(&alphabet, s.get("relators"))?;
    Presentation::new(alphabet, rels)
}

fn finite_presentation(s: &Sections) -> Result<FinitePresentation> {
    let p = presentation(s)?;
    let image = if s.has("image") {
        let mut by_gen: Vec<Option<String>> = vec![None; p.rank()];
        let mut degree = s.single_usize("order").ok().flatten().unwrap_or(0);
        let mut entries = Vec::new();
        for item in s.get("image") {
            let (g, perm) = item.split_once(':').ok_or_else(|| {
                Error::Parse(format!("[image]: expected `gen: cycles`, found `{item}`"))
            })?;
            let gi = p
                .alphabet
                .index_of(g.trim())
                .ok_or_else(|| Error::UnknownGenerator(g.trim().into()))?;
            for t in perm
                .split(|c: char| !c.is_ascii_digit())
                .filter(|t| !t.is_empty())
            {
                degree = degree.max(t.parse().unwrap_or(0));
            }
            entries.push((gi as usize, perm.trim().to_string()));
        }
        for (gi, perm) in entries {
            by_gen[gi] = Some(perm);
        }
        let perms = by_gen
            .into_iter()
            .map(|p| Permutation::parse(p.as_deref().unwrap_or("()"), degree))
            .collect::<Result<Vec<_>>>()?;
        Some(perms)
    } else {
        None
    };
    FinitePresentation::new(p, image)
}

fn format_front(alph: &OrderedAlphabet, r: &CollectionResult) -> String {
    let parts: Vec<String> = alph
        .a_symbols()
        .iter()
        .zip(&r.front)
        .map(|(&s, e)| format!("{}:{e}", alph.symbol(s).name))
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" ")
    }
}

fn emit_collection(
    out: &mut Report,
    alph: &OrderedAlphabet,
    y: &Word,
    r: &CollectionResult,
    dict: bool,
    verify: bool,
) {
    let amb = alph.ambient();
    out.line(format!("WORD {}", amb.format_word_compact(y)));
    out.line(format!("FRONT {}", format_front(alph, r)));
    out.line(format!("TAIL {}", r.format_tail(alph)));
    if dict {
        for (name, w) in r.dictionary(alph) {
            out.line(format!("DEF {name} = {}", amb.format_word_compact(&w)));
        }
    }
    if verify {
        out.check("reassembly", r.reassemble(alph) == *y);
        out.check("tokens", r.tail.iter().all(|(t, _)| t.is_certified(alph)));
    }
}

fn run_command(cmd: &Command) -> Result<Report> {
    let mut out = Report::default();
    match cmd {
        Command::Reduce(io) => {
            let s = read_sections(io)?;
            let alphabet = base_alphabet(&s)?;
            for w in words_of(&alphabet, s.get("words"))? {
                out.line(format!("WORD {}", alphabet.format_word_compact(&w)));
            }
        }
        Command::UGen { io, max_weight } => {
            let s = read_sections(io)?;
            let alph = plain_alphabet(&s)?;
            let terms = u_construction(&alph, *max_weight);
            for t in &terms {
                out.line(format!("U {}", alph.format_term(t)));
            }
            if io.verify {
                out.check("admissible", terms.iter().all(|t| is_admissible(t, &alph)));
                let defs = alph.definitions();
                let mut words: Vec<Word> = alph
                    .b_hat_symbols()
                    .iter()
                    .map(|&b| defs[b as usize].clone())
                    .collect();
                words.extend(terms.iter().map(|t| t.expand(&defs)));
                let ok =
                    GenTuple::new(words.clone()).is_ok_and(|t| nielsen_reduce(&t).is_independent());
                out.check("independent", ok);
            }
        }
        Command::ZGen {
            io,
            max_conjugators,
        } => {
            let s = read_sections(io)?;
            let alph = plain_alphabet(&s)?;
            let names = alph.names();
            let zs = z_construction(&alph, *max_conjugators);
            for z in &zs {
                out.line(format!("Z {}", z.format(&names)));
            }
            if io.verify {
                out.check(
                    "admissible",
                    zs.iter().all(|z| z.is_admissible(&alph, false)),
                );
            }
        }
        Command::RuGen { io, max_weight } => {
            let s = read_sections(io)?;
            let alph = restricted_alphabet(&s, &[])?;
            let r = ru_construction(&alph, *max_weight)?;
            for &b in &r.b_hat {
                out.line(format!("BHAT {}", alph.symbol(b).name));
            }
            for t in &r.ru {
                out.line(format!("U {}", alph.format_term(t)));
            }
            out.line(format!(
                "COMPLETE {}",
                if r.complete { "yes" } else { "no" }
            ));
            if io.verify {
                let defs = alph.definitions();
                let mut words: Vec<Word> =
                    r.b_hat.iter().map(|&b| defs[b as usize].clone()).collect();
                words.extend(r.ru.iter().map(|t| t.expand(&defs)));
                let g = fold_words(&words, alph.ambient().len());
                out.check("independent", g.rank() == words.len());
                if r.complete {
                    let order: u64 = alph
                        .symbols()
                        .iter()
                        .filter_map(|x| match x.kind {
                            crate::constructions::SymbolKind::A1 { gamma } => Some(gamma as u64),
                            _ => None,
                        })
                        .product();
                    let index = g.index();
                    out.line(format!(
                        "INDEX {}",
                        index.map_or("inf".into(), |i| i.to_string())
                    ));
                    out.check("index", index == Some(order as usize));
                }
            }
        }
        Command::Collect {
            io,
            emit_dictionary,
        } => {
            let s = read_sections(io)?;
            let alph = plain_alphabet(&s)?;
            for y in words_of(alph.ambient(), s.get("words"))? {
                let r = collect(&y, &alph)?;
                emit_collection(&mut out, &alph, &y, &r, *emit_dictionary, io.verify);
            }
        }
        Command::CollectRestricted {
            io,
            gamma,
            emit_dictionary,
        } => {
            let s = read_sections(io)?;
            let alph = restricted_alphabet(&s, gamma)?;
            for y in words_of(alph.ambient(), s.get("words"))? {
                let r = collect_restricted(&y, &alph)?;
                emit_collection(&mut out, &alph, &y, &r, *emit_dictionary, io.verify);
            }
        }
        Command::AdaptBasis { io, free, torsion } => {
            let s = read_sections(io)?;
            let alphabet = base_alphabet(&s)?;
            let lattice = s.matrix("lattice", Some(alphabet.len()))?;
            let spec = FactorSpec::new(alphabet.clone(), lattice)?;
            let ab = if *torsion
                || !*free
                    && !abelian_structure(&spec.lattice)
                        .invariant_factors
                        .is_empty()
            {
                adapt_basis_torsion(&spec)?
            } else {
                adapt_basis_free(&spec)?
            };
            let f = |w: &Word| alphabet.format_word_compact(w);
            for (w, g) in &ab.a1 {
                out.line(format!("A1 {} GAMMA {g}", f(w)));
            }
            for w in &ab.a2 {
                out.line(format!("A {}", f(w)));
            }
            for w in &ab.b {
                out.line(format!("B {}", f(w)));
            }
            out.line(format!("QUOTIENT {}", abelian_structure(&spec.lattice)));
            if io.verify {
                out.verification("adapted", &verify_adapted(&spec, &ab));
            }
        }
        Command::FactorBasis { io, max_weight } => {
            let s = read_sections(io)?;
            let alphabet = base_alphabet(&s)?;
            let lattice = s.matrix("lattice", Some(alphabet.len()))?;
            let spec = FactorSpec::new(alphabet.clone(), lattice)?;
            let ab = adapt_basis_torsion(&spec)?;
            let fb = if ab.a1.is_empty() {
                free_factor_basis(&spec, &ab, *max_weight)?
            } else {
                torsion_factor_basis(&spec, &ab, *max_weight)?
            };
            for sym in fb.alphabet.symbols() {
                out.line(format!(
                    "SYMBOL {} = {}",
                    sym.name,
                    alphabet.format_word_compact(&sym.definition)
                ));
            }
            for (label, w) in fb.labels().iter().zip(fb.words()) {
                out.line(format!(
                    "BASIS {label} = {}",
                    alphabet.format_word_compact(&w)
                ));
            }
            out.line(format!(
                "COMPLETE {}",
                if fb.complete { "yes" } else { "no" }
            ));
            if io.verify {
                out.verification("adapted", &verify_adapted(&spec, &ab));
                out.verification("basis", &verify_factor_basis(&spec, &fb));
            }
        }
        Command::Fold(io) => {
            let s = read_sections(io)?;
            let alphabet = base_alphabet(&s)?;
            let ws = words_of(&alphabet, s.get("subgroup"))?;
            let g = fold_words(&ws, alphabet.len());
            out.line(format!("VERTICES {}", g.vertex_count()));
            out.line(format!("EDGES {}", g.edge_count()));
            out.line(format!("RANK {}", g.rank()));
            out.line(format!(
                "INDEX {}",
                g.index().map_or("inf".into(), |i| i.to_string())
            ));
        }
        Command::Member(io) => {
            let s = read_sections(io)?;
            let alphabet = base_alphabet(&s)?;
            let g = fold_words(&words_of(&alphabet, s.get("subgroup"))?, alphabet.len());
            for w in words_of(&alphabet, s.get("words"))? {
                let m = if g.contains(&w) { "yes" } else { "no" };
                out.line(format!("MEMBER {} {m}", alphabet.format_word_compact(&w)));
            }
        }
        Command::Nielsen(io) => {
            let s = read_sections(io)?;
            let alphabet = base_alphabet(&s)?;
            let (t, dropped) = GenTuple::new_lenient(words_of(&alphabet, s.get("subgroup"))?);
            let rep = nielsen_reduce(&t);
            for w in rep.output.elements() {
                out.line(format!("NIELSEN {}", alphabet.format_word_compact(w)));
            }
            out.line(format!("MOVES {}", rep.moves.len()));
            out.line(format!("ELIMINATED {}", rep.eliminated + dropped));
            if io.verify {
                let same = same_subgroup(&t, &rep.output, alphabet.len());
                out.check("same-subgroup", same);
                out.check(
                    "reduced",
                    crate::subgroup::is_nielsen_reduced(rep.output.elements()),
                );
            }
        }
        Command::SameSubgroup(io) => {
            let s = read_sections(io)?;
            let alphabet = base_alphabet(&s)?;
            let (t1, _) = GenTuple::new_lenient(words_of(&alphabet, s.get("subgroup"))?);
            let (t2, _) = GenTuple::new_lenient(words_of(&alphabet, s.get("subgroup2"))?);
            let same = same_subgroup(&t1, &t2, alphabet.len());
            out.line(format!("SAME {}", if same { "yes" } else { "no" }));
        }
        Command::Snf(io) => {
            let s = read_sections(io)?;
            let m = s.matrix("matrix", None)?;
            let d = smith_normal_form(&m);
            let diag: Vec<String> = d.diagonal().iter().map(ToString::to_string).collect();
            out.line(format!(
                "DIAGONAL {}",
                if diag.is_empty() {
                    "-".into()
                } else {
                    diag.join(" ")
                }
            ));
            out.line(format!("RANK {}", d.rank()));
            out.line(format!("STRUCTURE {}", abelian_structure(&m)));
            for (tag, mat) in [("U", &d.u), ("V", &d.v)] {
                for i in 0..mat.rows() {
                    let r: Vec<String> = mat.row(i).iter().map(ToString::to_string).collect();
                    out.line(format!("{tag} {}", r.join(" ")));
                }
            }
            if io.verify {
                out.check("product", d.u.mul(&m).mul(&d.v) == d.d);
                let unit = |x: &IntMatrix| {
                    let det = x.determinant();
                    det == 1.into() || det == (-1).into()
                };
                out.check("unimodular", unit(&d.u) && unit(&d.v));
                let diag = d.diagonal();
                let divides = diag.windows(2).all(|w| {
                    use num_traits::Zero;
                    w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero())
                });
                out.check("divisibility", divides);
            }
        }
        Command::LcsAdapt(io) => {
            let s = read_sections(io)?;
            let p = presentation(&s)?;
            let ad = adapt_relators_weight1(&p)?;
            let amb = &p.alphabet;
            for (i, g) in ad.generators.iter().enumerate() {
                out.line(format!("GEN y{} = {}", i + 1, amb.format_word_compact(g)));
            }
            for (w, d) in &ad.weight1 {
                out.line(format!("W1 {} D {d}", w.format(amb)));
            }
            for r in &ad.residual {
                let c = class2_normal_form(&r.expand(&p.relators), p.rank())?;
                out.line(format!("RESIDUAL {} C {}", r.format(amb), fmt_c(&c.c)));
            }
            if io.verify {
                let mut ok = true;
                for (i, (w, d)) in ad.weight1.iter().enumerate() {
                    let e = ad
                        .in_new_basis(&w.expand(&p.relators))
                        .exponent_vector(p.rank());
                    ok &= e
                        .iter()
                        .enumerate()
                        .all(|(j, &x)| x == if j == i { *d } else { 0 });
                }
                out.check("diagonal", ok);
                out.check(
                    "residual",
                    ad.residual.iter().all(|r| {
                        r.expand(&p.relators)
                            .exponent_vector(p.rank())
                            .iter()
                            .all(|&x| x == 0)
                    }),
                );
            }
        }
        Command::Rbasic { io, samples, seed } => {
            let s = read_sections(io)?;
            let p = presentation(&s)?;
            let rb = r_basic_weight2(&p)?;
            let amb = &p.alphabet;
            for (w, d) in &rb.adaptation.weight1 {
                out.line(format!("W1 {} D {d}", w.format(amb)));
            }
            for q in &rb.weight2 {
                out.line(format!(
                    "W2 {} ALPHA {} WITNESS {}",
                    rb.format_vector(&q.vector, amb),
                    q.alpha,
                    q.witness.format(amb)
                ));
            }
            if io.verify {
                let mut rng = StdRng::seed_from_u64(*seed);
                let rep = verify_hall_like(&p, &rb, *samples, &mut rng);
                out.line(format!("SAMPLES {} PASSED {}", rep.samples, rep.passed));
                out.check("hall-like", rep.failures.is_empty());
            }
        }
        Command::Rnf(io) => {
            let s = read_sections(io)?;
            let p = presentation(&s)?;
            let rb = r_basic_weight2(&p)?;
            for e in s.get("elements") {
                let w = parse_relator_product(&p.alphabet, p.relators.len(), e)?;
                let nf = r_normal_form(&p, &rb, &w)?;
                let f = |v: &[i64]| {
                    v.iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                out.line(format!(
                    "RNF {} : {} ; {}",
                    w.format(&p.alphabet),
                    f(&nf.weight1),
                    f(&nf.weight2)
                ));
                if io.verify {
                    out.check("residual", residual(&p, &rb, &w, &nf).is_identity());
                }
            }
        }
        Command::Schur {
            part,
            io,
            max_weight,
            r_prime_on_w1,
        } => {
            let s = read_sections(io)?;
            let fp = finite_presentation(&s)?;
            let amb = fp.presentation.alphabet.clone();
            let f = |w: &Word| amb.format_word_compact(w);
            match part {
                SchurPart::Bases => {
                    let b = schur_bases(&fp, *max_weight)?;
                    out.line(format!("ORDER {}", b.schreier.order()));
                    for w in &b.schreier.words {
                        out.line(format!("R {}", f(w)));
                    }
                    for (i, (w, a)) in b.w1.iter().enumerate() {
                        out.line(format!("W1 a{} = {} ALPHA {a}", i + 1, f(w)));
                    }
                    for (i, w) in b.w2.iter().enumerate() {
                        out.line(format!("W2 b{} = {}", i + 1, f(w)));
                    }
                    for t in &b.u1 {
                        out.line(format!("U1 {}", b.alphabet.format_term(t)));
                    }
                    if io.verify {
                        out.verification("schur-bases", &b.verify(*max_weight, *r_prime_on_w1)?);
                    }
                }
                SchurPart::TGens => {
                    let (w1, t) = t_generators(&fp.presentation)?;
                    for (w, d) in &w1 {
                        out.line(format!("S {} ALPHA {d}", w.format(&amb)));
                    }
                    for r in &t {
                        let c =
                            class2_normal_form(&r.expand(&fp.presentation.relators), amb.len())?;
                        out.line(format!("T {} C {}", r.format(&amb), fmt_c(&c.c)));
                    }
                }
                SchurPart::WGens => {
                    let w = w_generators(&fp)?;
                    for ((base, beta), powered) in w.w_hat.iter().zip(&w.w) {
                        let c = class2_normal_form(powered, amb.len())?;
                        out.line(format!("W {} BETA {beta} C {}", f(base), fmt_c(&c.c)));
                    }
                    out.line(format!("COUNT {}", w.w.len()));
                    if io.verify {
                        let zero =
                            w.w.iter()
                                .all(|x| x.exponent_vector(amb.len()).iter().all(|&e| e == 0));
                        out.check("zero-exponents", zero);
                        if fp.image.is_some() {
                            let sb = crate::multiplicator::schreier_basis(&fp)?;
                            out.check("in-kernel", w.w.iter().all(|x| sb.contains(x)));
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

fn fmt_c(c: &[i64]) -> String {
    if c.is_empty() {
        "-".into()
    } else {
        c.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Names of the weight-2 basics in coordinate order, e.g. for headers.
pub fn weight2_names(alphabet: &Alphabet) -> Vec<String> {
    basic_commutators(alphabet.len(), 2)
        .expect("weight 2")
        .iter()
        .map(|b| format_basic(b, alphabet.names()))
        .collect()
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Verification(_) => 1,
        _ => 2,
    }
}

/// Run with the given arguments; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match run_command(&cli.command) {
        Ok(rep) => {
            for l in &rep.lines {
                let _ = writeln!(stdout, "{l}");
            }
            i32::from(rep.failed)
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}
