//! Line-delimited JSON helpers.

use std::io::{BufRead, Write};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};

/// Reads one value per non-blank line. Errors carry the 1-based line.
pub fn read<T: DeserializeOwned, R: BufRead>(reader: R) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: i + 1,
            reason: e.to_string(),
        })?);
    }
    Ok(out)
}

pub fn read_str<T: DeserializeOwned>(s: &str) -> Result<Vec<T>> {
    read(s.as_bytes())
}

/// Writes one compact JSON object per line, each terminated by `\n`.
pub fn write<T: Serialize, W: Write>(mut writer: W, items: &[T]) -> Result<()> {
    for item in items {
        serde_json::to_writer(&mut writer, item)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

pub fn to_string<T: Serialize>(items: &[T]) -> Result<String> {
    let mut buf = Vec::new();
    write(&mut buf, items)?;
    String::from_utf8(buf).map_err(|e| Error::Internal(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_line_numbers() {
        let v = vec![1u32, 2, 3];
        let s = to_string(&v).unwrap();
        assert_eq!(s, "1\n2\n3\n");
        assert_eq!(read_str::<u32>(&s).unwrap(), v);
        match read_str::<u32>("1\n\nx\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }
}
