//! Round-synchronous message passing between simulated players.
//!
//! Every round is a barrier: players post envelopes to an outbox, the
//! [`Network`] validates and delivers them all at once, and appends them to
//! the [`Transcript`] in `(round, from, to)` order. Channels are reliable;
//! the only fault the harness can inject is a silent player whose messages
//! never leave its outbox (used to exercise protocol aborts).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::algebra::FieldElement;
use crate::protocol::PlayerState;
use crate::sharing::PlayerId;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimError {
    #[error("unknown player {0}")]
    UnknownPlayer(PlayerId),
    #[error("outbox mixes rounds: expected round {expected}, found {found}")]
    MixedRounds { expected: usize, found: usize },
    #[error("{kind} payload must carry {expected} values, got {actual}")]
    BadPayload {
        kind: MessageKind,
        expected: usize,
        actual: usize,
    },
    #[error("player {0} is corrupted twice")]
    DuplicateCorruption(PlayerId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Recipient {
    Player(PlayerId),
    Broadcast,
}

impl fmt::Display for Recipient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Recipient::Player(id) => write!(f, "{id}"),
            Recipient::Broadcast => write!(f, "*"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Phase {
    Detection,
    Correction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MessageKind {
    /// The volunteer's public minors, one per row.
    MinorBroadcast,
    /// Shamir sub-shares of a player's `(u, v)` determinant terms.
    DetSubshare,
    /// A player's summed sub-shares `(s_u, s_v)`, opened to everyone.
    DetOpen,
    /// One additive portion of `gamma_i * alpha_i`.
    Portion,
    /// A helper's aggregated portions, sent to the recovering player.
    Sigma,
}

impl MessageKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MessageKind::MinorBroadcast => "minor_broadcast",
            MessageKind::DetSubshare => "det_subshare",
            MessageKind::DetOpen => "det_open",
            MessageKind::Portion => "portion",
            MessageKind::Sigma => "sigma",
        }
    }

    pub fn phase(self) -> Phase {
        match self {
            MessageKind::MinorBroadcast | MessageKind::DetSubshare | MessageKind::DetOpen => Phase::Detection,
            MessageKind::Portion | MessageKind::Sigma => Phase::Correction,
        }
    }

    /// Payload length for a network of `n` players.
    pub fn arity(self, n: usize) -> usize {
        match self {
            MessageKind::MinorBroadcast => n,
            MessageKind::DetSubshare | MessageKind::DetOpen => 2,
            MessageKind::Portion | MessageKind::Sigma => 1,
        }
    }
}

impl fmt::Display for MessageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Envelope {
    pub round: usize,
    pub from: PlayerId,
    pub to: Recipient,
    pub kind: MessageKind,
    pub payload: Vec<FieldElement>,
}

impl Envelope {
    fn sort_key(&self) -> (usize, PlayerId, Recipient) {
        (self.round, self.from, self.to)
    }
}

impl fmt::Display for Envelope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let payload: Vec<String> = self.payload.iter().map(|v| v.to_string()).collect();
        write!(
            f,
            "round={} from={} to={} kind={} payload={}",
            self.round,
            self.from,
            self.to,
            self.kind,
            payload.join(",")
        )
    }
}

/// Ordered log of every delivered envelope plus the phase of each round.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    envelopes: Vec<Envelope>,
    /// `rounds[r - 1]` is the phase of round `r`.
    rounds: Vec<Phase>,
}

impl Transcript {
    pub fn envelopes(&self) -> &[Envelope] {
        &self.envelopes
    }

    pub fn rounds(&self) -> usize {
        self.rounds.len()
    }

    pub fn phase_of(&self, round: usize) -> Option<Phase> {
        round.checked_sub(1).and_then(|r| self.rounds.get(r).copied())
    }

    pub fn in_phase(&self, phase: Phase) -> impl Iterator<Item = &Envelope> {
        self.envelopes.iter().filter(move |e| self.phase_of(e.round) == Some(phase))
    }

    /// One line per envelope, newline terminated.
    pub fn export(&self) -> String {
        let mut out = String::new();
        for e in &self.envelopes {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }
}

/// Number of rounds the transcript spent in `phase`.
pub fn round_count(tr: &Transcript, phase: Phase) -> usize {
    tr.rounds.iter().filter(|&&p| p == phase).count()
}

/// What each player received in one round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inboxes {
    boxes: Vec<Vec<Envelope>>,
}

impl Inboxes {
    pub fn inbox(&self, id: PlayerId) -> &[Envelope] {
        id.checked_sub(1)
            .and_then(|i| self.boxes.get(i))
            .map_or(&[], Vec::as_slice)
    }

    pub fn total(&self) -> usize {
        self.boxes.iter().map(Vec::len).sum()
    }
}

#[derive(Debug, Clone)]
pub struct Network {
    n: usize,
    phase: Phase,
    transcript: Transcript,
    silent: BTreeSet<PlayerId>,
}

impl Network {
    pub fn new(n: usize) -> Self {
        Network {
            n,
            phase: Phase::Detection,
            transcript: Transcript::default(),
            silent: BTreeSet::new(),
        }
    }

    /// Players whose outgoing messages are never delivered.
    pub fn with_silent(mut self, ids: impl IntoIterator<Item = PlayerId>) -> Self {
        self.silent.extend(ids);
        self
    }

    pub fn players(&self) -> usize {
        self.n
    }

    /// Round index the next [`Network::deliver_round`] call will close.
    pub fn current_round(&self) -> usize {
        self.transcript.rounds.len() + 1
    }

    pub fn begin_phase(&mut self, phase: Phase) {
        self.phase = phase;
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    pub fn into_transcript(self) -> Transcript {
        self.transcript
    }

    fn check_player(&self, id: PlayerId) -> Result<(), SimError> {
        if id == 0 || id > self.n {
            return Err(SimError::UnknownPlayer(id));
        }
        Ok(())
    }

    /// Delivers one round of messages. Broadcasts fan out to all `n`
    /// players. The round counter advances even for an empty outbox.
    pub fn deliver_round(&mut self, outbox: Vec<Envelope>) -> Result<Inboxes, SimError> {
        let round = self.current_round();
        for e in &outbox {
            if e.round != round {
                return Err(SimError::MixedRounds { expected: round, found: e.round });
            }
            self.check_player(e.from)?;
            if let Recipient::Player(to) = e.to {
                self.check_player(to)?;
            }
            let expected = e.kind.arity(self.n);
            if e.payload.len() != expected {
                return Err(SimError::BadPayload {
                    kind: e.kind,
                    expected,
                    actual: e.payload.len(),
                });
            }
        }

        let mut sent: Vec<Envelope> = outbox.into_iter().filter(|e| !self.silent.contains(&e.from)).collect();
        sent.sort_by_key(Envelope::sort_key);

        let mut boxes = vec![Vec::new(); self.n];
        for e in &sent {
            match e.to {
                Recipient::Player(to) => boxes[to - 1].push(e.clone()),
                Recipient::Broadcast => boxes.iter_mut().for_each(|b| b.push(e.clone())),
            }
        }
        self.transcript.envelopes.extend(sent);
        self.transcript.rounds.push(self.phase);
        Ok(Inboxes { boxes })
    }
}

/// Share overwrites applied before a protocol starts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AdversarySpec {
    corruptions: BTreeMap<PlayerId, u64>,
}

impl AdversarySpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(player: PlayerId, value: u64) -> Self {
        AdversarySpec {
            corruptions: BTreeMap::from([(player, value)]),
        }
    }

    pub fn corrupt(mut self, player: PlayerId, value: u64) -> Result<Self, SimError> {
        if self.corruptions.insert(player, value).is_some() {
            return Err(SimError::DuplicateCorruption(player));
        }
        Ok(self)
    }

    pub fn corruptions(&self) -> impl Iterator<Item = (PlayerId, u64)> + '_ {
        self.corruptions.iter().map(|(&k, &v)| (k, v))
    }

    pub fn is_empty(&self) -> bool {
        self.corruptions.is_empty()
    }
}

/// A share overwrite that was applied, including no-op ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorruptionRecord {
    pub player: PlayerId,
    pub old: FieldElement,
    pub new: FieldElement,
}

/// Overwrites the stored shares of the listed players. Nothing is modified
/// if any listed player is unknown.
pub fn apply_adversary(
    players: &mut [PlayerState],
    spec: &AdversarySpec,
) -> Result<Vec<CorruptionRecord>, SimError> {
    for (id, _) in spec.corruptions() {
        if !players.iter().any(|p| p.id() == id) {
            return Err(SimError::UnknownPlayer(id));
        }
    }
    let mut log = Vec::new();
    for (id, value) in spec.corruptions() {
        let player = players.iter_mut().find(|p| p.id() == id).expect("checked above");
        let old = player.share().value;
        let new = old.modulus().element(value);
        player.set_share_value(new);
        log.push(CorruptionRecord { player: id, old, new });
    }
    Ok(log)
}
