//! Distributed single-error localization and share recovery.
//!
//! Detection: every player `i` owns one row of the key-equation system
//! `a_0 + a_1 i + ... + a_{n-2} i^{n-2} - alpha_i b_0 = i alpha_i`. Solving for
//! `b_0` by Cramer's rule needs `det(A1)` and `det(A2)`, whose last columns
//! (`i alpha_i` and `-alpha_i`) are the only secret entries. Expanding both
//! along that column leaves public minors of the Vandermonde part, so each
//! player contributes one locally computed term to each determinant. The
//! terms are Shamir-shared, summed and opened, revealing only `d1` and `d2`.
//!
//! Recovery: helpers weight their shares by Lagrange constants for the
//! target's point, split the products additively among themselves, and the
//! target sums the aggregated portions.

use std::collections::BTreeSet;

use rand_chacha::ChaCha20Rng;

use crate::algebra::{interpolate_at, AlgebraError, FieldElement, MatrixZp, PrimeModulus};
use crate::sharing::{
    additive_split, lagrange_constant, player_rng, sharing_polynomial, PlayerId, Share, SharingError,
    SharingParams,
};
use crate::simnet::{Envelope, Inboxes, MessageKind, Network, Phase, Recipient, SimError};

/// Smallest network that can locate one error (`3e + 1` with `e = 1`).
pub const MIN_DETECTION_PLAYERS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProtocolError {
    #[error("error detection needs at least {MIN_DETECTION_PLAYERS} players, got {0}")]
    TooFewPlayers(usize),
    #[error("player ids must be 1..=n in order")]
    BadPlayerSet,
    #[error("round {round} timed out: player {player} is missing {kind} messages")]
    ProtocolAbort {
        round: usize,
        player: PlayerId,
        kind: MessageKind,
    },
    #[error("bad helper set: {0}")]
    BadHelperSet(SharingError),
    #[error("expected {expected} portions, received {received}")]
    MissingPortion { expected: usize, received: usize },
    #[error("expected {expected} sigma values, received {received}")]
    MissingSigma { expected: usize, received: usize },
    #[error("recovery needs {needed} helpers, only {available} available")]
    InsufficientHelpers { needed: usize, available: usize },
    #[error("players reached different detection outcomes")]
    Disagreement,
    #[error(transparent)]
    Network(#[from] SimError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Sharing(#[from] SharingError),
}

/// Per-protocol messages a player has accepted so far.
#[derive(Debug, Clone, Default)]
struct Scratch {
    minors: Option<Vec<FieldElement>>,
    summed_subshares: Option<(FieldElement, FieldElement)>,
    detection: Option<DetectionOutcome>,
    sigma: Option<FieldElement>,
}

#[derive(Debug, Clone)]
pub struct PlayerState {
    id: PlayerId,
    share: Share,
    params: SharingParams,
    rng: ChaCha20Rng,
    scratch: Scratch,
}

impl PlayerState {
    /// Player owning `share`, drawing randomness from stream `share.owner`.
    pub fn new(share: Share, params: SharingParams, seed: u64) -> Self {
        PlayerState {
            id: share.owner,
            share,
            params,
            rng: player_rng(seed, share.owner as u64),
            scratch: Scratch::default(),
        }
    }

    pub fn id(&self) -> PlayerId {
        self.id
    }

    pub fn share(&self) -> Share {
        self.share
    }

    pub fn params(&self) -> &SharingParams {
        &self.params
    }

    pub(crate) fn set_share_value(&mut self, value: FieldElement) {
        self.share.value = value;
    }

    /// Outcome this player computed in the last detection run.
    pub fn detection(&self) -> Option<&DetectionOutcome> {
        self.scratch.detection.as_ref()
    }

    fn modulus(&self) -> PrimeModulus {
        self.params.modulus()
    }
}

/// Players `1..=n` holding the given shares.
pub fn players_from_shares(shares: &[Share], params: SharingParams, seed: u64) -> Result<Vec<PlayerState>, ProtocolError> {
    if shares.len() != params.players() || shares.iter().enumerate().any(|(i, s)| s.owner != i + 1) {
        return Err(ProtocolError::BadPlayerSet);
    }
    Ok(shares.iter().map(|&s| PlayerState::new(s, params, seed)).collect())
}

pub fn players_from_values(values: &[u64], params: SharingParams, seed: u64) -> Result<Vec<PlayerState>, ProtocolError> {
    let m = params.modulus();
    let shares: Vec<Share> = values
        .iter()
        .enumerate()
        .map(|(i, &v)| Share::new(i + 1, m.element(v)))
        .collect();
    players_from_shares(&shares, params, seed)
}

/// One player's row of the key-equation system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayerEquation {
    /// Public part `[1, i, i^2, ..., i^{n-2}]`.
    pub row: Vec<FieldElement>,
    /// Coefficient of `b_0`, i.e. `-alpha_i`.
    pub b0_coefficient: FieldElement,
    /// Right-hand side `i * alpha_i`.
    pub rhs: FieldElement,
}

pub fn build_player_equation(id: PlayerId, alpha: FieldElement, n: usize) -> PlayerEquation {
    let m = alpha.modulus();
    let x = m.element(id as u64);
    let mut row = Vec::with_capacity(n - 1);
    let mut pow = m.one();
    for _ in 0..n - 1 {
        row.push(pow);
        pow *= x;
    }
    PlayerEquation {
        row,
        b0_coefficient: -alpha,
        rhs: x * alpha,
    }
}

/// The `n x n` matrix of public columns with a zero placeholder where the
/// secret column goes.
pub fn public_matrix(n: usize, modulus: PrimeModulus) -> MatrixZp {
    let mut a = MatrixZp::zeros(n, n, modulus);
    for i in 1..=n {
        let eq = build_player_equation(i, modulus.zero(), n);
        for (c, &v) in eq.row.iter().enumerate() {
            a.set(i - 1, c, v);
        }
    }
    a
}

/// `M_i = det(A^{i,n})` for each row `i`. The minors are shared by `A1` and
/// `A2` since the two matrices only differ in the deleted column.
pub fn compute_public_minors(n: usize, modulus: PrimeModulus) -> Result<Vec<FieldElement>, ProtocolError> {
    if n < MIN_DETECTION_PLAYERS {
        return Err(ProtocolError::TooFewPlayers(n));
    }
    let a = public_matrix(n, modulus);
    (0..n)
        .map(|r| Ok(a.minor_determinant(r, n - 1)?))
        .collect()
}

/// Player `owner`'s terms of the cofactor expansions of `d1` and `d2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DetContribution {
    pub owner: PlayerId,
    pub u: FieldElement,
    pub v: FieldElement,
}

pub fn local_det_contribution(id: PlayerId, alpha: FieldElement, minor: FieldElement, n: usize) -> DetContribution {
    let m = alpha.modulus();
    let x = m.element(id as u64);
    let signed_minor = if (id + n) % 2 == 0 { minor } else { -minor };
    DetContribution {
        owner: id,
        u: x * alpha * signed_minor,
        v: -alpha * signed_minor,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    ErrorAt(PlayerId),
    NoErrorDetected,
    Undecodable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DetectionOutcome {
    pub d1: FieldElement,
    pub d2: FieldElement,
    pub b0: Option<FieldElement>,
    pub verdict: Verdict,
}

/// Turns the opened determinants into a verdict. The locator is `x + b0`
/// with `b0 = d1 / d2`, so the corrupted player is `p - b0`.
pub fn locate_error(d1: FieldElement, d2: FieldElement, n: usize) -> Result<DetectionOutcome, ProtocolError> {
    d1.checked_add(d2)?;
    if d2.is_zero() {
        let verdict = if d1.is_zero() {
            Verdict::NoErrorDetected
        } else {
            Verdict::Undecodable
        };
        return Ok(DetectionOutcome { d1, d2, b0: None, verdict });
    }
    let b0 = d1 * d2.inverse()?;
    let location = (-b0).value() as usize;
    let verdict = if (1..=n).contains(&location) {
        Verdict::ErrorAt(location)
    } else {
        Verdict::Undecodable
    };
    Ok(DetectionOutcome {
        d1,
        d2,
        b0: Some(b0),
        verdict,
    })
}

fn check_players(players: &[PlayerState], net: &Network) -> Result<(), ProtocolError> {
    if players.iter().enumerate().any(|(i, p)| p.id != i + 1) || net.players() != players.len() {
        return Err(ProtocolError::BadPlayerSet);
    }
    Ok(())
}

/// Messages of `kind` in `inbox`, at most one per sender, in sender order.
fn collect(inboxes: &Inboxes, player: PlayerId, kind: MessageKind) -> Vec<&Envelope> {
    let mut seen = BTreeSet::new();
    inboxes
        .inbox(player)
        .iter()
        .filter(|e| e.kind == kind && seen.insert(e.from))
        .collect()
}

fn abort(net: &Network, player: PlayerId, kind: MessageKind) -> ProtocolError {
    ProtocolError::ProtocolAbort {
        // the round that just closed
        round: net.current_round() - 1,
        player,
        kind,
    }
}

/// Runs the three-round detection protocol: minor broadcast, sub-share
/// distribution, opening. Every player computes the outcome independently;
/// the common outcome is returned.
pub fn run_detection(players: &mut [PlayerState], net: &mut Network) -> Result<DetectionOutcome, ProtocolError> {
    let n = players.len();
    if n < MIN_DETECTION_PLAYERS {
        return Err(ProtocolError::TooFewPlayers(n));
    }
    check_players(players, net)?;
    let modulus = players[0].modulus();
    let t = players[0].params.threshold();
    net.begin_phase(Phase::Detection);

    // Round 1: the lowest-id player volunteers to compute the public minors.
    let volunteer = players[0].id;
    let minors = compute_public_minors(n, modulus)?;
    let round = net.current_round();
    let inboxes = net.deliver_round(vec![Envelope {
        round,
        from: volunteer,
        to: Recipient::Broadcast,
        kind: MessageKind::MinorBroadcast,
        payload: minors,
    }])?;
    for p in players.iter_mut() {
        let got = collect(&inboxes, p.id, MessageKind::MinorBroadcast);
        let msg = got.first().ok_or_else(|| abort(net, p.id, MessageKind::MinorBroadcast))?;
        p.scratch.minors = Some(msg.payload.clone());
    }

    // Round 2: each player shares its (u, v) terms with threshold t.
    let round = net.current_round();
    let mut outbox = Vec::with_capacity(n * n);
    for p in players.iter_mut() {
        let minors = p.scratch.minors.as_ref().expect("set in round 1");
        let c = local_det_contribution(p.id, p.share.value, minors[p.id - 1], n);
        let pu = sharing_polynomial(c.u, t, &mut p.rng)?;
        let pv = sharing_polynomial(c.v, t, &mut p.rng)?;
        for to in 1..=n {
            let x = modulus.element(to as u64);
            outbox.push(Envelope {
                round,
                from: p.id,
                to: Recipient::Player(to),
                kind: MessageKind::DetSubshare,
                payload: vec![pu.eval(x)?, pv.eval(x)?],
            });
        }
    }
    let inboxes = net.deliver_round(outbox)?;
    for p in players.iter_mut() {
        let got = collect(&inboxes, p.id, MessageKind::DetSubshare);
        if got.len() != n {
            return Err(abort(net, p.id, MessageKind::DetSubshare));
        }
        let su = got.iter().fold(modulus.zero(), |acc, e| acc + e.payload[0]);
        let sv = got.iter().fold(modulus.zero(), |acc, e| acc + e.payload[1]);
        p.scratch.summed_subshares = Some((su, sv));
    }

    // Round 3: open the summed sub-shares and interpolate d1, d2 at zero.
    let round = net.current_round();
    let outbox = players
        .iter()
        .map(|p| {
            let (su, sv) = p.scratch.summed_subshares.expect("set in round 2");
            Envelope {
                round,
                from: p.id,
                to: Recipient::Broadcast,
                kind: MessageKind::DetOpen,
                payload: vec![su, sv],
            }
        })
        .collect();
    let inboxes = net.deliver_round(outbox)?;
    for p in players.iter_mut() {
        let got = collect(&inboxes, p.id, MessageKind::DetOpen);
        if got.len() != n {
            return Err(abort(net, p.id, MessageKind::DetOpen));
        }
        let xs: Vec<FieldElement> = got.iter().map(|e| modulus.element(e.from as u64)).collect();
        let pts_u: Vec<_> = xs.iter().zip(&got).map(|(&x, e)| (x, e.payload[0])).collect();
        let pts_v: Vec<_> = xs.iter().zip(&got).map(|(&x, e)| (x, e.payload[1])).collect();
        let d1 = interpolate_at(&pts_u, modulus.zero())?;
        let d2 = interpolate_at(&pts_v, modulus.zero())?;
        p.scratch.detection = Some(locate_error(d1, d2, n)?);
    }

    let first = players[0].scratch.detection.expect("set in round 3");
    if players.iter().any(|p| p.scratch.detection != Some(first)) {
        return Err(ProtocolError::Disagreement);
    }
    Ok(first)
}

/// A portion of a helper's weighted share, addressed to another helper.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Portion {
    pub to: PlayerId,
    pub value: FieldElement,
}

/// Computes `gamma_i * alpha_i` and splits it into `t` portions, one per
/// helper (the sender keeps the one addressed to itself).
pub fn prepare_correction_portions(
    state: &mut PlayerState,
    helpers: &[PlayerId],
    target: PlayerId,
    t: usize,
) -> Result<Vec<Portion>, ProtocolError> {
    if helpers.len() != t {
        return Err(ProtocolError::InsufficientHelpers { needed: t, available: helpers.len() });
    }
    let gamma = lagrange_constant(state.id, helpers, target, state.modulus()).map_err(ProtocolError::BadHelperSet)?;
    let weighted = gamma * state.share.value;
    let portions = additive_split(weighted, t, &mut state.rng);
    Ok(helpers
        .iter()
        .zip(portions)
        .map(|(&to, value)| Portion { to, value })
        .collect())
}

/// `sigma_j`, the sum of the `t` portions helper `j` received.
pub fn aggregate_portions(received: &[FieldElement], t: usize) -> Result<FieldElement, ProtocolError> {
    if received.len() != t || t == 0 {
        return Err(ProtocolError::MissingPortion { expected: t, received: received.len() });
    }
    Ok(received.iter().copied().sum())
}

/// The target's corrected share, the sum of the helpers' sigma values.
pub fn recover_share(sigmas: &[FieldElement], t: usize) -> Result<FieldElement, ProtocolError> {
    if sigmas.len() != t || t == 0 {
        return Err(ProtocolError::MissingSigma { expected: t, received: sigmas.len() });
    }
    Ok(sigmas.iter().copied().sum())
}

/// The `t` lowest ids other than `target`.
pub fn default_helpers(n: usize, t: usize, target: PlayerId) -> Result<Vec<PlayerId>, ProtocolError> {
    let helpers: Vec<PlayerId> = (1..=n).filter(|&i| i != target).take(t).collect();
    if helpers.len() < t {
        return Err(ProtocolError::InsufficientHelpers { needed: t, available: helpers.len() });
    }
    Ok(helpers)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectionOutcome {
    pub target: PlayerId,
    pub helpers: Vec<PlayerId>,
    pub previous: FieldElement,
    pub recovered: FieldElement,
}

/// Two-round share recovery for `target`, helped by the `t` lowest other ids.
pub fn run_correction(
    players: &mut [PlayerState],
    target: PlayerId,
    net: &mut Network,
) -> Result<CorrectionOutcome, ProtocolError> {
    check_players(players, net)?;
    let n = players.len();
    if target == 0 || target > n {
        return Err(SimError::UnknownPlayer(target).into());
    }
    let t = players[0].params.threshold();
    let helpers = default_helpers(n, t, target)?;
    net.begin_phase(Phase::Correction);

    // Round 1: helpers distribute additive portions of gamma_i * alpha_i.
    let round = net.current_round();
    let mut outbox = Vec::with_capacity(t * t);
    for &h in &helpers {
        for portion in prepare_correction_portions(&mut players[h - 1], &helpers, target, t)? {
            outbox.push(Envelope {
                round,
                from: h,
                to: Recipient::Player(portion.to),
                kind: MessageKind::Portion,
                payload: vec![portion.value],
            });
        }
    }
    let inboxes = net.deliver_round(outbox)?;
    for &h in &helpers {
        let got: Vec<FieldElement> = collect(&inboxes, h, MessageKind::Portion)
            .iter()
            .map(|e| e.payload[0])
            .collect();
        players[h - 1].scratch.sigma = Some(aggregate_portions(&got, t)?);
    }

    // Round 2: helpers send sigma to the target.
    let round = net.current_round();
    let outbox = helpers
        .iter()
        .map(|&h| Envelope {
            round,
            from: h,
            to: Recipient::Player(target),
            kind: MessageKind::Sigma,
            payload: vec![players[h - 1].scratch.sigma.expect("set in round 1")],
        })
        .collect();
    let inboxes = net.deliver_round(outbox)?;
    let sigmas: Vec<FieldElement> = collect(&inboxes, target, MessageKind::Sigma)
        .iter()
        .map(|e| e.payload[0])
        .collect();
    let recovered = recover_share(&sigmas, t)?;

    let state = &mut players[target - 1];
    let previous = state.share.value;
    state.set_share_value(recovered);
    Ok(CorrectionOutcome {
        target,
        helpers,
        previous,
        recovered,
    })
}
