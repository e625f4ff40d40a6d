use biset_core::functor::Verdict;
use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug)]
pub enum Format {
    Text,
    Json,
}

/// What a command produced: a verdict for the exit code, and two renderings.
pub struct Output {
    pub verdict: Option<Verdict>,
    pub text: String,
    pub json: Value,
}

impl Output {
    pub fn new(verdict: Option<Verdict>, text: String, result: &impl Serialize) -> Self {
        Output { verdict, text, json: serde_json::to_value(result).expect("result serializes") }
    }
}

pub struct Failure {
    pub kind: &'static str,
    pub message: String,
}

/// Run metadata. Everything that may differ between runs of the same input lives here.
#[derive(Serialize)]
pub struct Meta {
    pub elapsed_ms: u64,
    pub threads: usize,
    pub seed: u64,
    pub cache_dir: Option<String>,
    pub version: &'static str,
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema: u32,
    command: &'a str,
    field: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<ErrorBody<'a>>,
    meta: Meta,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: &'a str,
}

pub fn emit(format: Format, command: &str, field: &str, outcome: Result<Output, Failure>, meta: Meta) {
    match format {
        Format::Text => match outcome {
            Ok(out) => {
                print!("{}", out.text);
                if !out.text.ends_with('\n') {
                    println!();
                }
            }
            Err(f) => eprintln!("biset {command}: {}", f.message),
        },
        Format::Json => {
            let (result, error) = match &outcome {
                Ok(out) => (Some(out.json.clone()), None),
                Err(f) => (None, Some(ErrorBody { kind: f.kind, message: &f.message })),
            };
            let env = Envelope { schema: SCHEMA, command, field, result, error, meta };
            println!("{}", serde_json::to_string_pretty(&env).expect("envelope serializes"));
        }
    }
}
