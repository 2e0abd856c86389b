//! Binary state snapshots.
//!
//! Layout, all little-endian: magic `MSW1`, one version byte, the mode counts
//! `N_x N_y N_z` as `u32`, the time as `f64`, then every coefficient as `f64`
//! in the order `A` components, `Pi` components, `Re psi`, `Im psi`.

use crate::error::{CliError, Result};
use msdd_core::{Domain, State};
use std::path::Path;

pub const MAGIC: &[u8; 4] = b"MSW1";
pub const VERSION: u8 = 1;
const HEADER: usize = 4 + 1 + 12 + 8;

/// Decoded snapshot before it is attached to a domain.
#[derive(Debug, Clone, PartialEq)]
pub struct RawSnapshot {
    pub modes: [usize; 3],
    pub t: f64,
    pub data: Vec<f64>,
}

pub fn encode(state: &State) -> Vec<u8> {
    let flat = state.to_flat();
    let mut out = Vec::with_capacity(HEADER + 8 * flat.len());
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    for n in state.psi.modes() {
        out.extend_from_slice(&(n as u32).to_le_bytes());
    }
    out.extend_from_slice(&state.t.to_le_bytes());
    for v in flat {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode(bytes: &[u8]) -> Result<RawSnapshot> {
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        return Err(CliError::Format("missing MSW1 magic".into()));
    }
    if bytes.len() < 5 {
        return Err(CliError::Corrupt("header ends before the version byte".into()));
    }
    if bytes[4] != VERSION {
        return Err(CliError::Format(format!(
            "unsupported version {} (expected {VERSION})",
            bytes[4]
        )));
    }
    if bytes.len() < HEADER {
        return Err(CliError::Corrupt(format!(
            "{} bytes is shorter than the {HEADER}-byte header",
            bytes.len()
        )));
    }
    let u32_at = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap()) as usize;
    let modes = [u32_at(5), u32_at(9), u32_at(13)];
    let t = f64::from_le_bytes(bytes[17..25].try_into().unwrap());
    let body = &bytes[HEADER..];
    if body.len() % 8 != 0 {
        return Err(CliError::Corrupt(format!(
            "payload of {} bytes is not a whole number of f64 values",
            body.len()
        )));
    }
    let data = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(RawSnapshot { modes, t, data })
}

/// Attaches a decoded snapshot to `domain`, checking mode counts and length.
pub fn into_state(raw: &RawSnapshot, domain: &Domain) -> Result<State> {
    if raw.modes != domain.modes() {
        return Err(msdd_core::Error::Dimension(format!(
            "snapshot grid {:?} differs from the configured grid {:?}",
            raw.modes,
            domain.modes()
        ))
        .into());
    }
    if raw.data.len() != State::flat_len(domain) {
        return Err(CliError::Corrupt(format!(
            "expected {} coefficients for grid {:?}, found {}",
            State::flat_len(domain),
            raw.modes,
            raw.data.len()
        )));
    }
    Ok(State::from_flat(domain, raw.t, &raw.data)?)
}

pub fn save(path: &Path, state: &State) -> Result<()> {
    std::fs::write(path, encode(state)).map_err(|e| CliError::io(path, e))
}

pub fn read_raw(path: &Path) -> Result<RawSnapshot> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    decode(&bytes)
}

pub fn load(path: &Path, domain: &Domain) -> Result<State> {
    into_state(&read_raw(path)?, domain)
}
