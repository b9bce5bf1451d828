//! Stable output encodings: JSON with floats at 17 significant digits and
//! the fixed CSV row schema for uncertainty sweeps.

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use std::io;

use crate::jointmeas::UncertaintyReport;

pub const CSV_HEADER: [&str; 8] = ["theta", "g1", "g2", "dm1", "dm2", "product", "bound", "saturated"];

/// Scientific notation with 17 significant digits, e.g. `1.4142135623730951e0`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Pretty JSON printer that writes every float with [`format_float`].
struct SigDigitsFormatter<'a>(PrettyFormatter<'a>);

macro_rules! delegate {
    ($($name:ident($($arg:ident : $ty:ty),*)),* $(,)?) => {
        $(
            fn $name<W: ?Sized + io::Write>(&mut self, writer: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.0.$name(writer $(, $arg)*)
            }
        )*
    };
}

impl Formatter for SigDigitsFormatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_float(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    delegate!(
        begin_array(),
        end_array(),
        begin_array_value(first: bool),
        end_array_value(),
        begin_object(),
        end_object(),
        begin_object_key(first: bool),
        begin_object_value(),
        end_object_value(),
    );
}

/// Pretty-printed JSON; non-finite floats become `null`.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigDigitsFormatter(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

impl UncertaintyReport {
    /// Fields in [`CSV_HEADER`] order for the sweep angle `theta`.
    pub fn csv_record(&self, theta: f64) -> [String; 8] {
        [
            format_float(theta),
            format_float(self.g1),
            format_float(self.g2),
            format_float(self.dm1),
            format_float(self.dm2),
            format_float(self.product),
            format_float(self.bound),
            self.saturated.to_string(),
        ]
    }
}
