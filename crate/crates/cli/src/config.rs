//! Command-line and config-file parsing into a fully resolved [`RunConfig`].
//!
//! Config file grammar, one entry per line:
//!
//! ```text
//! # comment
//! section.key = value
//! ```
//!
//! `section` is `global` or a subcommand name. Keys may use `-` or `_`.
//! Later lines override earlier ones, and command-line flags override the file.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::error::{ContextKind, ContextValue, ErrorKind};
use clap::{Arg, ArgAction, Command};

use crate::error::{CliError, Result};
use crate::schema::{self, flag_name, normalize_key, Kind, Param, Subcommand};

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Float(f64),
    Count(usize),
    Seed(u64),
    Floats(Vec<f64>),
    Counts(Vec<usize>),
    Vec3([f64; 3]),
    Text(String),
    Pairs(Vec<(String, String)>),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join<T>(f: &mut fmt::Formatter<'_>, xs: &[T], one: impl Fn(&T) -> String) -> fmt::Result {
            let parts: Vec<String> = xs.iter().map(one).collect();
            f.write_str(&parts.join(","))
        }
        match self {
            Value::Float(x) => write!(f, "{x:.16e}"),
            Value::Count(n) => write!(f, "{n}"),
            Value::Seed(n) => write!(f, "{n}"),
            Value::Floats(xs) => join(f, xs, |x| format!("{x:.16e}")),
            Value::Counts(xs) => join(f, xs, |x| x.to_string()),
            Value::Vec3(v) => join(f, v, |x| format!("{x:.16e}")),
            Value::Text(s) => f.write_str(s),
            Value::Pairs(ps) => join(f, ps, |(k, v)| format!("{k}={v}")),
        }
    }
}

fn parse_float(key: &str, kind: Kind, raw: &str) -> Result<f64> {
    raw.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| type_error(key, kind, raw))
}

fn type_error(key: &str, kind: Kind, raw: &str) -> CliError {
    CliError::Type {
        key: key.to_string(),
        value: raw.to_string(),
        expected: kind.expected(),
    }
}

fn split_list(raw: &str) -> Vec<&str> {
    if raw.trim().is_empty() {
        return Vec::new();
    }
    raw.split(',').map(str::trim).collect()
}

pub fn parse_value(key: &str, kind: Kind, raw: &str) -> Result<Value> {
    let err = || type_error(key, kind, raw);
    Ok(match kind {
        Kind::Float => Value::Float(parse_float(key, kind, raw)?),
        Kind::Count => Value::Count(raw.trim().parse().map_err(|_| err())?),
        Kind::Seed => Value::Seed(raw.trim().parse().map_err(|_| err())?),
        Kind::Floats => {
            let xs = split_list(raw)
                .into_iter()
                .map(|s| parse_float(key, kind, s).map_err(|_| err()))
                .collect::<Result<Vec<_>>>()?;
            if xs.is_empty() {
                return Err(err());
            }
            Value::Floats(xs)
        }
        Kind::Counts => {
            let xs = split_list(raw)
                .into_iter()
                .map(|s| s.parse::<usize>().map_err(|_| err()))
                .collect::<Result<Vec<_>>>()?;
            if xs.is_empty() {
                return Err(err());
            }
            Value::Counts(xs)
        }
        Kind::Vec3 => {
            let xs = split_list(raw);
            if xs.len() != 3 {
                return Err(err());
            }
            let mut v = [0.0; 3];
            for (slot, s) in v.iter_mut().zip(xs) {
                *slot = parse_float(key, kind, s).map_err(|_| err())?;
            }
            Value::Vec3(v)
        }
        Kind::Choice(choices) => {
            let s = raw.trim();
            if !choices.contains(&s) {
                return Err(CliError::Type {
                    key: key.to_string(),
                    value: raw.to_string(),
                    expected: kind.expected(),
                });
            }
            Value::Text(s.to_string())
        }
        Kind::Pairs => {
            let mut pairs = Vec::new();
            for entry in split_list(raw) {
                let (k, v) = entry.split_once('=').ok_or_else(err)?;
                let k = normalize_key(k);
                if k.is_empty() {
                    return Err(err());
                }
                pairs.push((k, v.trim().to_string()));
            }
            Value::Pairs(pairs)
        }
        Kind::Path => {
            if raw.is_empty() {
                return Err(err());
            }
            Value::Text(raw.to_string())
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub subcommand: &'static str,
    /// Resolved subcommand settings: explicit values plus defaults.
    pub settings: BTreeMap<String, Value>,
    pub seed: u64,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub samples: Option<usize>,
    pub n_max: usize,
    pub energy_scale: f64,
}

impl RunConfig {
    pub fn get(&self, key: &str) -> Option<&Value> {
        self.settings.get(key)
    }

    pub fn float(&self, key: &str) -> Option<f64> {
        match self.settings.get(key) {
            Some(Value::Float(x)) => Some(*x),
            _ => None,
        }
    }

    pub fn count(&self, key: &str) -> Option<usize> {
        match self.settings.get(key) {
            Some(Value::Count(n)) => Some(*n),
            _ => None,
        }
    }

    pub fn floats(&self, key: &str) -> Option<&[f64]> {
        match self.settings.get(key) {
            Some(Value::Floats(x)) => Some(x),
            _ => None,
        }
    }

    pub fn vec3(&self, key: &str) -> Option<[f64; 3]> {
        match self.settings.get(key) {
            Some(Value::Vec3(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn text(&self, key: &str) -> Option<&str> {
        match self.settings.get(key) {
            Some(Value::Text(s)) => Some(s),
            _ => None,
        }
    }

    /// Every resolved setting, as echoed into output metadata.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let mut meta = BTreeMap::new();
        meta.insert("subcommand".to_string(), self.subcommand.to_string());
        for (k, v) in &self.settings {
            meta.insert(format!("config.{}.{k}", self.subcommand), v.to_string());
        }
        meta.insert("config.global.seed".into(), self.seed.to_string());
        meta.insert(
            "config.global.format".into(),
            match self.format {
                Format::Csv => "csv",
                Format::Json => "json",
            }
            .into(),
        );
        let output = match &self.output {
            Some(p) => p.display().to_string(),
            None => "-".to_string(),
        };
        meta.insert("config.global.output".into(), output);
        if let Some(s) = self.samples {
            meta.insert("config.global.samples".into(), s.to_string());
        }
        meta.insert("config.global.n_max".into(), self.n_max.to_string());
        meta.insert("config.global.energy_scale".into(), format!("{:.16e}", self.energy_scale));
        meta
    }
}

/// Raw `section → key → value` entries from a config file.
pub type ConfigFile = BTreeMap<String, BTreeMap<String, String>>;

pub fn parse_config_file(text: &str) -> Result<ConfigFile> {
    let mut out = ConfigFile::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (lhs, rhs) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected `section.key = value`", lineno + 1)))?;
        let (section, key) = lhs
            .trim()
            .split_once('.')
            .ok_or_else(|| CliError::Usage(format!("config line {}: key needs a section prefix", lineno + 1)))?;
        let section = section.trim();
        let key = normalize_key(key);
        let known = if section == "global" {
            schema::global(&key).is_some()
        } else {
            match schema::subcommand(section) {
                Some(sub) => sub.param(&key).is_some(),
                None => return Err(CliError::Unknown(format!("{section}.{key}"))),
            }
        };
        if !known {
            return Err(CliError::Unknown(format!("{section}.{key}")));
        }
        out.entry(section.to_string())
            .or_default()
            .insert(key, rhs.trim().to_string());
    }
    Ok(out)
}

fn arg_for(p: &Param) -> Arg {
    let mut help = p.help.to_string();
    if let Some(d) = p.default {
        if !d.is_empty() {
            help.push_str(&format!(" [default: {d}]"));
        }
    }
    if p.required {
        help.push_str(" (required)");
    }
    if let Kind::Choice(c) = p.kind {
        help.push_str(&format!(" {{{}}}", c.join(", ")));
    }
    let arg = Arg::new(p.key)
        .long(flag_name(p.key))
        .help(help)
        .allow_negative_numbers(true)
        .allow_hyphen_values(true);
    if p.kind == Kind::Pairs {
        arg.action(ArgAction::Append)
    } else {
        arg.action(ArgAction::Set)
    }
}

fn clap_message(e: &clap::Error) -> String {
    let text = e.render().to_string();
    text.strip_prefix("error: ").unwrap_or(&text).trim_end().to_string()
}

pub fn command() -> Command {
    let mut cmd = Command::new("interfield")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Interference energy of phase-coherent classical and quantum fields")
        .subcommand_required(true)
        .arg(
            Arg::new("config")
                .long("config")
                .global(true)
                .help("read settings from a `section.key = value` file"),
        );
    for p in schema::GLOBAL {
        cmd = cmd.arg(arg_for(p).global(true));
    }
    for sub in schema::SUBCOMMANDS {
        let mut sc = Command::new(sub.name).about(sub.about);
        for p in sub.params {
            sc = sc.arg(arg_for(p));
        }
        cmd = cmd.subcommand(sc);
    }
    cmd
}

/// Flag values take precedence over config-file values, which take precedence over defaults.
fn resolve(params: &[Param], section: &str, flags: &BTreeMap<String, String>, file: &ConfigFile) -> Result<BTreeMap<String, Value>> {
    let from_file = file.get(section);
    let mut out = BTreeMap::new();
    let mut missing = Vec::new();
    for p in params {
        let raw = flags
            .get(p.key)
            .or_else(|| from_file.and_then(|f| f.get(p.key)))
            .map(String::as_str)
            .or(p.default);
        match raw {
            Some(raw) => {
                out.insert(p.key.to_string(), parse_value(p.key, p.kind, raw)?);
            }
            None if p.required => missing.push(p.key.to_string()),
            None => {}
        }
    }
    if !missing.is_empty() {
        return Err(CliError::Missing(missing));
    }
    Ok(out)
}

fn check_groups(sub: &Subcommand, settings: &BTreeMap<String, Value>) -> Result<()> {
    for group in sub.one_of {
        let given: Vec<&str> = group.iter().copied().filter(|k| settings.contains_key(*k)).collect();
        if given.len() > 1 {
            return Err(CliError::Usage(format!("`{}` are mutually exclusive", given.join("` and `"))));
        }
    }
    let missing: Vec<String> = sub
        .one_of
        .iter()
        .filter(|group| !group.iter().any(|k| settings.contains_key(*k)))
        .map(|group| group[0].to_string())
        .collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(CliError::Missing(missing))
    }
}

/// Parses `args` (program name first). A `--config` file is read from disk
/// unless `file_text` supplies its contents.
pub fn parse_config<I, T>(args: I, file_text: Option<&str>) -> Result<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = command()
        .try_get_matches_from(args)
        .map_err(|e| match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                CliError::Info(e.render().to_string())
            }
            ErrorKind::UnknownArgument => match e.get(ContextKind::InvalidArg) {
                Some(ContextValue::String(flag)) => CliError::Unknown(flag.clone()),
                _ => CliError::Unknown(clap_message(&e)),
            },
            _ => CliError::Usage(clap_message(&e)),
        })?;
    let (name, sub_matches) = matches
        .subcommand()
        .ok_or_else(|| CliError::Usage("a subcommand is required".into()))?;
    let sub = schema::subcommand(name).ok_or_else(|| CliError::Usage(format!("unknown subcommand {name}")))?;

    let file = match (file_text, sub_matches.get_one::<String>("config")) {
        (Some(text), _) => parse_config_file(text)?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read config file {path}: {e}")))?;
            parse_config_file(&text)?
        }
        (None, None) => ConfigFile::new(),
    };

    let collect = |params: &[Param]| -> BTreeMap<String, String> {
        params
            .iter()
            .filter_map(|p| {
                if p.kind == Kind::Pairs {
                    let all: Vec<String> = sub_matches.get_many::<String>(p.key)?.cloned().collect();
                    Some((p.key.to_string(), all.join(",")))
                } else {
                    sub_matches.get_one::<String>(p.key).map(|v| (p.key.to_string(), v.clone()))
                }
            })
            .collect()
    };

    let settings = resolve(sub.params, sub.name, &collect(sub.params), &file)?;
    check_groups(sub, &settings)?;
    let global = resolve(schema::GLOBAL, "global", &collect(schema::GLOBAL), &file)?;

    let seed = match global.get("seed") {
        Some(Value::Seed(s)) => *s,
        _ => 0,
    };
    let format = match global.get("format") {
        Some(Value::Text(f)) if f == "json" => Format::Json,
        _ => Format::Csv,
    };
    let output = match global.get("output") {
        Some(Value::Text(p)) => Some(PathBuf::from(p)),
        _ => None,
    };
    let samples = match global.get("samples") {
        Some(Value::Count(n)) => Some(*n),
        _ => None,
    };
    let n_max = match global.get("n_max") {
        Some(Value::Count(n)) => *n,
        _ => interfield::quantum::DEFAULT_N_MAX,
    };
    let energy_scale = match global.get("energy_scale") {
        Some(Value::Float(x)) => *x,
        _ => 1.0,
    };
    Ok(RunConfig {
        subcommand: sub.name,
        settings,
        seed,
        format,
        output,
        samples,
        n_max,
        energy_scale,
    })
}
