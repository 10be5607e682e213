//! Scenario files and the end-to-end runner behind the `mpcshield` binary.
//!
//! A scenario is a list of `key=value` lines; `#` starts a comment.
//!
//! ```text
//! prime=7
//! players=4
//! threshold=2
//! shares=2,0,5,3
//! corrupt=3:4
//! mode=full
//! seed=1
//! ```
//!
//! `secret=<v>` may replace `shares=`, in which case a dealer samples the
//! sharing polynomial. `threshold` defaults to `players - 2`, `mode` to
//! `full` and `seed` to 0.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::algebra::{AlgebraError, PrimeModulus};
use crate::coding::{bw_decode, CodingError, Codeword, RsParams};
use crate::protocol::{
    players_from_shares, run_correction, run_detection, PlayerState, ProtocolError, Verdict,
    MIN_DETECTION_PLAYERS,
};
use crate::sharing::{player_rng, shamir_share, PlayerId, Share, SharingError, SharingParams};
use crate::simnet::{apply_adversary, round_count, AdversarySpec, Network, Phase, SimError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScenarioError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("missing required keys: {}", .0.join(", "))]
    MissingKeys(Vec<&'static str>),
    #[error("invalid scenario: {0}")]
    Validation(String),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Coding(#[from] CodingError),
    #[error(transparent)]
    Sharing(#[from] SharingError),
    #[error(transparent)]
    Network(#[from] SimError),
}

impl ScenarioError {
    /// True for malformed input, as opposed to semantic validation failures.
    pub fn is_parse_error(&self) -> bool {
        matches!(self, ScenarioError::Parse { .. } | ScenarioError::MissingKeys(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Detect,
    Correct,
    Full,
    Encode,
    Decode,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Detect => "detect",
            Mode::Correct => "correct",
            Mode::Full => "full",
            Mode::Encode => "encode",
            Mode::Decode => "decode",
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "detect" => Mode::Detect,
            "correct" => Mode::Correct,
            "full" => Mode::Full,
            "encode" => Mode::Encode,
            "decode" => Mode::Decode,
            other => return Err(format!("unknown mode `{other}`")),
        })
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where the players' shares come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShareSource {
    /// A dealer shares this secret with a fresh random polynomial.
    Secret(u64),
    /// Shares handed directly to players `1..=n`.
    Explicit(Vec<u64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub prime: PrimeModulus,
    pub players: usize,
    pub threshold: usize,
    pub source: ShareSource,
    pub corrupt: Option<(PlayerId, u64)>,
    pub mode: Mode,
    pub seed: u64,
}

const KEYS: [&str; 8] = ["prime", "players", "threshold", "secret", "shares", "corrupt", "mode", "seed"];

fn parse_num<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T, ScenarioError> {
    value.parse().map_err(|_| ScenarioError::Parse {
        line,
        message: format!("`{key}` expects a non-negative integer, got `{value}`"),
    })
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let mut fields: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ScenarioError::Parse {
                line,
                message: format!("expected `key=value`, got `{content}`"),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        let Some(&key) = KEYS.iter().find(|&&k| k == key) else {
            return Err(ScenarioError::Parse {
                line,
                message: format!("unknown key `{key}`"),
            });
        };
        if fields.insert(key, (line, value)).is_some() {
            return Err(ScenarioError::Parse {
                line,
                message: format!("duplicate key `{key}`"),
            });
        }
    }

    let mut missing = Vec::new();
    for key in ["prime", "players"] {
        if !fields.contains_key(key) {
            missing.push(key);
        }
    }
    if !fields.contains_key("secret") && !fields.contains_key("shares") {
        missing.push("secret|shares");
    }
    if !missing.is_empty() {
        return Err(ScenarioError::MissingKeys(missing));
    }
    if let (Some(_), Some(&(line, _))) = (fields.get("secret"), fields.get("shares")) {
        return Err(ScenarioError::Parse {
            line,
            message: "`secret` and `shares` are mutually exclusive".into(),
        });
    }

    let (line, v) = fields["prime"];
    let prime_raw: u64 = parse_num(line, "prime", v)?;
    let (line, v) = fields["players"];
    let players: usize = parse_num(line, "players", v)?;
    let threshold = match fields.get("threshold") {
        Some(&(line, v)) => Some(parse_num::<usize>(line, "threshold", v)?),
        None => None,
    };
    let source = if let Some(&(line, v)) = fields.get("secret") {
        ShareSource::Secret(parse_num(line, "secret", v)?)
    } else {
        let (line, v) = fields["shares"];
        let values = v
            .split(',')
            .map(|s| parse_num(line, "shares", s.trim()))
            .collect::<Result<Vec<u64>, _>>()?;
        ShareSource::Explicit(values)
    };
    let corrupt = match fields.get("corrupt") {
        Some(&(line, v)) => {
            let (pos, val) = v.split_once(':').ok_or_else(|| ScenarioError::Parse {
                line,
                message: format!("`corrupt` expects `position:value`, got `{v}`"),
            })?;
            Some((parse_num(line, "corrupt", pos.trim())?, parse_num(line, "corrupt", val.trim())?))
        }
        None => None,
    };
    let mode = match fields.get("mode") {
        Some(&(line, v)) => v.parse().map_err(|message| ScenarioError::Parse { line, message })?,
        None => Mode::Full,
    };
    let seed = match fields.get("seed") {
        Some(&(line, v)) => parse_num(line, "seed", v)?,
        None => 0,
    };

    let prime = PrimeModulus::new(prime_raw).map_err(|e| match e {
        AlgebraError::InvalidModulus(p) => ScenarioError::Validation(format!("prime {p} is not prime or out of range")),
        other => ScenarioError::Validation(other.to_string()),
    })?;
    let threshold = threshold.unwrap_or_else(|| players.saturating_sub(2).max(1));
    let scenario = Scenario {
        prime,
        players,
        threshold,
        source,
        corrupt,
        mode,
        seed,
    };
    scenario.validate()?;
    Ok(scenario)
}

impl Scenario {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let p = self.prime.value();
        let invalid = |msg: String| Err(ScenarioError::Validation(msg));
        if self.players == 0 || self.players as u64 > p - 1 {
            return invalid(format!("players must be in 1..={}, got {}", p - 1, self.players));
        }
        if self.threshold == 0 || self.threshold > self.players {
            return invalid(format!("threshold must be in 1..={}, got {}", self.players, self.threshold));
        }
        match &self.source {
            ShareSource::Secret(s) if *s >= p => return invalid(format!("secret {s} is not below {p}")),
            ShareSource::Explicit(v) if v.len() != self.players => {
                return invalid(format!("{} shares given for {} players", v.len(), self.players))
            }
            ShareSource::Explicit(v) => {
                if let Some(bad) = v.iter().find(|&&x| x >= p) {
                    return invalid(format!("share {bad} is not below {p}"));
                }
            }
            _ => {}
        }
        if let Some((pos, val)) = self.corrupt {
            if pos == 0 || pos > self.players {
                return invalid(format!("corrupt position must be in 1..={}, got {pos}", self.players));
            }
            if val >= p {
                return invalid(format!("corrupt value {val} is not below {p}"));
            }
        }
        match self.mode {
            Mode::Detect | Mode::Full if self.players < MIN_DETECTION_PLAYERS => {
                invalid(format!("error detection needs at least {MIN_DETECTION_PLAYERS} players"))
            }
            Mode::Correct if self.corrupt.is_none() => invalid("mode=correct needs a `corrupt` position".into()),
            Mode::Correct if self.threshold >= self.players => {
                invalid("share recovery needs threshold below the player count".into())
            }
            _ => Ok(()),
        }
    }

    pub fn sharing_params(&self) -> Result<SharingParams, ScenarioError> {
        Ok(SharingParams::new(self.threshold, self.players, self.prime)?)
    }

    /// The players' shares before any corruption.
    pub fn deal(&self) -> Result<Vec<Share>, ScenarioError> {
        let params = self.sharing_params()?;
        match &self.source {
            ShareSource::Secret(s) => {
                let mut rng = player_rng(self.seed, 0);
                Ok(shamir_share(self.prime.element(*s), &params, &mut rng)?)
            }
            ShareSource::Explicit(values) => Ok(values
                .iter()
                .enumerate()
                .map(|(i, &v)| Share::new(i + 1, self.prime.element(v)))
                .collect()),
        }
    }
}

/// Output of one scenario run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioRun {
    pub report: String,
    pub transcript: String,
    pub exit_code: i32,
}

fn join(values: impl IntoIterator<Item = u64>) -> String {
    values.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn share_values(players: &[PlayerState]) -> String {
    join(players.iter().map(|p| p.share().value.value()))
}

/// Deals, corrupts, and runs the requested protocol phases.
///
/// Exit code 0 means the run succeeded (including "no error detected"),
/// 1 means the received shares could not be decoded.
pub fn run_scenario(s: &Scenario) -> Result<ScenarioRun, ScenarioError> {
    s.validate()?;
    let params = s.sharing_params()?;
    let shares = s.deal()?;

    let mut report = String::new();
    let r = &mut report;
    writeln!(r, "prime: {}", s.prime).unwrap();
    writeln!(r, "players: {}", s.players).unwrap();
    writeln!(r, "threshold: {}", s.threshold).unwrap();
    writeln!(r, "mode: {}", s.mode).unwrap();
    writeln!(r, "seed: {}", s.seed).unwrap();
    writeln!(r, "shares: {}", join(shares.iter().map(|sh| sh.value.value()))).unwrap();

    let mut players = players_from_shares(&shares, params, s.seed)?;
    let mut net = Network::new(s.players);
    let mut exit_code = 0;

    if s.mode == Mode::Encode {
        return Ok(ScenarioRun {
            report,
            transcript: String::new(),
            exit_code,
        });
    }

    let adversary = match s.corrupt {
        Some((pos, val)) => AdversarySpec::single(pos, val),
        None => AdversarySpec::new(),
    };
    for rec in apply_adversary(&mut players, &adversary)? {
        writeln!(r, "corrupted: player={} old={} new={}", rec.player, rec.old, rec.new).unwrap();
    }
    writeln!(r, "received: {}", share_values(&players)).unwrap();

    match s.mode {
        Mode::Encode => unreachable!(),
        Mode::Decode => {
            let rs = RsParams::new(s.players, s.threshold, s.prime)?;
            let word = Codeword::new(players.iter().map(|p| p.share().value).collect());
            match bw_decode(&word, &rs) {
                Ok(out) => {
                    let errors = if out.error_positions.is_empty() {
                        "none".to_string()
                    } else {
                        join(out.error_positions.iter().map(|&i| i as u64))
                    };
                    let message = join((0..s.threshold).map(|i| out.message_poly.coefficient(i).value()));
                    writeln!(r, "decode: errors={errors} message={message}").unwrap();
                    writeln!(r, "corrected: {}", join(out.corrected.values())).unwrap();
                }
                Err(CodingError::Undecodable) => {
                    writeln!(r, "decode: undecodable").unwrap();
                    exit_code = 1;
                }
                Err(e) => return Err(e.into()),
            }
        }
        Mode::Correct => {
            let (target, _) = s.corrupt.expect("validated");
            let out = run_correction(&mut players, target, &mut net)?;
            let rounds = round_count(net.transcript(), Phase::Correction);
            writeln!(r, "correction: player={} recovered={} rounds={rounds}", out.target, out.recovered).unwrap();
        }
        Mode::Detect | Mode::Full => {
            let out = run_detection(&mut players, &mut net)?;
            let verdict = match out.verdict {
                Verdict::ErrorAt(l) => format!("location={l}"),
                Verdict::NoErrorDetected => "none".into(),
                Verdict::Undecodable => "undecodable".into(),
            };
            writeln!(r, "detection: {verdict}").unwrap();
            writeln!(r, "d1: {}", out.d1).unwrap();
            writeln!(r, "d2: {}", out.d2).unwrap();
            match out.b0 {
                Some(b0) => writeln!(r, "b0: {b0}").unwrap(),
                None => writeln!(r, "b0: none").unwrap(),
            }
            writeln!(r, "detection_rounds: {}", round_count(net.transcript(), Phase::Detection)).unwrap();
            match out.verdict {
                Verdict::Undecodable => exit_code = 1,
                Verdict::NoErrorDetected if s.mode == Mode::Full => {
                    writeln!(r, "correction: none").unwrap();
                }
                Verdict::ErrorAt(target) if s.mode == Mode::Full => {
                    let out = run_correction(&mut players, target, &mut net)?;
                    let rounds = round_count(net.transcript(), Phase::Correction);
                    writeln!(r, "correction: player={} recovered={} rounds={rounds}", out.target, out.recovered)
                        .unwrap();
                    writeln!(r, "final: {}", share_values(&players)).unwrap();
                }
                _ => {}
            }
        }
    }
    writeln!(r, "status: {}", if exit_code == 0 { "ok" } else { "undecodable" }).unwrap();

    Ok(ScenarioRun {
        report,
        transcript: net.transcript().export(),
        exit_code,
    })
}
