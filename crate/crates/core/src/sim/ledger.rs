//! Event log of the lending simulation and the balances it folds into.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EventKind {
    /// Outside capital enters the bank.
    SeedDeposit,
    /// Share of a deposit held back as reserve.
    ReserveSetAside,
    /// New loan written against a deposit or against synthetic capital.
    LoanIssued,
    /// Loan proceeds returning to the bank as a deposit.
    Redeposit,
    /// Loan proceeds that left the institution group.
    Leak,
    /// Default insurance premium paid on the insured share of a loan.
    PremiumPaid,
    /// Origination fee charged on the insured share of a loan.
    FeeCollected,
    /// Capital booked on the strength of an insurance note.
    SyntheticCapitalBooked,
}

/// One ledger entry. `level` is the insurance generation (1-based) and
/// `iteration` the deposit-to-loan cycle within it (0 for the seed deposit).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LedgerEvent {
    pub seq: u64,
    pub kind: EventKind,
    pub amount: f64,
    pub level: u32,
    pub iteration: u32,
}

/// Cumulative balances of the single representative bank.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BankState {
    pub reserves: f64,
    pub deposits: f64,
    pub loans_outstanding: f64,
    pub synthetic_capital: f64,
    pub insured_notional: f64,
    pub premiums_paid: f64,
    pub fees_collected: f64,
}

/// Folds events into a [`BankState`], checking sequence integrity.
///
/// The simulator drives its own state through this type, so replaying a
/// log reproduces the simulated balances bit for bit.
#[derive(Debug, Clone, Default)]
pub(crate) struct LedgerBook {
    state: BankState,
    next_seq: u64,
    pending_premium: f64,
    pending_fee: f64,
}

impl LedgerBook {
    pub(crate) fn state(&self) -> &BankState {
        &self.state
    }

    pub(crate) fn next_seq(&self) -> u64 {
        self.next_seq
    }

    pub(crate) fn apply(&mut self, event: &LedgerEvent) -> Result<()> {
        if event.seq != self.next_seq {
            return Err(Error::Integrity(format!(
                "expected sequence number {}, found {}",
                self.next_seq, event.seq
            )));
        }
        if !(event.amount.is_finite() && event.amount >= 0.0) {
            return Err(Error::Integrity(format!(
                "event {} carries amount {}",
                event.seq, event.amount
            )));
        }
        let s = &mut self.state;
        match event.kind {
            EventKind::SeedDeposit | EventKind::Redeposit => s.deposits += event.amount,
            EventKind::ReserveSetAside => s.reserves += event.amount,
            EventKind::LoanIssued => s.loans_outstanding += event.amount,
            EventKind::Leak => {}
            EventKind::PremiumPaid => {
                s.premiums_paid += event.amount;
                self.pending_premium += event.amount;
            }
            EventKind::FeeCollected => {
                s.fees_collected += event.amount;
                self.pending_fee += event.amount;
            }
            EventKind::SyntheticCapitalBooked => {
                s.synthetic_capital += event.amount;
                // booked = (1 + fee - premium) * insured
                s.insured_notional += event.amount - self.pending_fee + self.pending_premium;
                self.pending_fee = 0.0;
                self.pending_premium = 0.0;
            }
        }
        self.next_seq += 1;
        Ok(())
    }
}

/// Rebuilds the bank's balances from an event log.
pub fn replay_ledger(events: &[LedgerEvent]) -> Result<BankState> {
    let mut book = LedgerBook::default();
    for event in events {
        book.apply(event)?;
    }
    Ok(*book.state())
}

/// Writes the log as CSV with columns `seq,kind,amount,level,iteration`.
pub fn write_events_csv<W: Write>(events: &[LedgerEvent], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for event in events {
        w.serialize(event)
            .map_err(|e| Error::Integrity(format!("writing event log: {e}")))?;
    }
    w.flush()
        .map_err(|e| Error::Integrity(format!("writing event log: {e}")))
}

/// Parses a CSV log written by [`write_events_csv`]. Unknown kinds and
/// malformed rows are integrity errors.
pub fn read_events_csv<R: Read>(reader: R) -> Result<Vec<LedgerEvent>> {
    csv::Reader::from_reader(reader)
        .deserialize()
        .map(|row| row.map_err(|e| Error::Integrity(format!("reading event log: {e}"))))
        .collect()
}

pub fn events_to_json(events: &[LedgerEvent]) -> String {
    serde_json::to_string(events).expect("ledger events always serialize")
}

pub fn events_from_json(json: &str) -> Result<Vec<LedgerEvent>> {
    serde_json::from_str(json).map_err(|e| Error::Integrity(format!("reading event log: {e}")))
}
