//! Plain-text flow dumps: one `tail head amount` record per arc, sorted by
//! `(tail, head)`. Exact amounts print as reduced fractions (`3/2`), floats
//! in shortest round-trip decimal form.

use std::io::{BufRead, Write};
use std::str::FromStr;

use hanoiflow_core::{Amount, ArcFlow};

use crate::error::{Error, Result};

pub fn write_flow<A: Amount, W: Write>(flow: &ArcFlow<A>, mut out: W) -> Result<()> {
    for ((tail, head), amount) in flow.iter() {
        writeln!(out, "{tail} {head} {amount}")?;
    }
    Ok(())
}

/// Reads a dump written by [`write_flow`]. Blank lines and `#` comments are skipped.
pub fn read_flow<A, R>(input: R) -> Result<ArcFlow<A>>
where
    A: Amount + FromStr,
    R: BufRead,
{
    let mut flow = ArcFlow::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |message: &str| Error::Parse { line: idx + 1, message: message.to_string() };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [tail, head, amount] = fields[..] else {
            return Err(bad("expected `tail head amount`"));
        };
        let tail = tail.parse().map_err(|_| bad("tail is not a vertex index"))?;
        let head = head.parse().map_err(|_| bad("head is not a vertex index"))?;
        let amount: A = amount.parse().map_err(|_| bad("amount is not a number"))?;
        if amount < A::zero() {
            return Err(bad("negative amount"));
        }
        flow.add(tail, head, amount);
    }
    Ok(flow)
}
