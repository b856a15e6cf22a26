use std::sync::Arc;
use std::time::Duration;

use hazelkit::dataset::{write_jsonl, TrainingRecord, DEFAULT_SYSTEM_MESSAGE};
use hazelkit::llm::transport::write_fixture;
use hazelkit::llm::{
    network_calls, ApiClient, ClientSettings, JobStatus, LiveTransport, LlmError, RecordedResponse, ReplayTransport,
    RetryPolicy,
};
use serde_json::json;

fn chat_body(content: &str) -> serde_json::Value {
    json!({
        "choices": [{"index": 0, "message": {"role": "assistant", "content": content}, "finish_reason": "stop"}],
        "usage": {"prompt_tokens": 10, "completion_tokens": 5, "total_tokens": 15}
    })
}

fn job_body(status: &str) -> serde_json::Value {
    let mut v = json!({
        "id": "ftjob-1", "model": "gpt-3.5-turbo", "training_file": "file-1",
        "hyperparameters": {"n_epochs": 3}, "status": status
    });
    if status == "succeeded" {
        v["fine_tuned_model"] = json!("ft:gpt-3.5-turbo:hazel");
    }
    if status == "failed" {
        v["error"] = json!({"message": "training file has too few examples"});
    }
    v
}

fn settings() -> ClientSettings {
    ClientSettings {
        retry: RetryPolicy { max_attempts: 3, initial_delay: Duration::from_millis(1), max_delay: Duration::from_millis(2) },
        ..ClientSettings::default()
    }
}

fn replay(dir: &std::path::Path) -> ApiClient {
    ApiClient::new(Arc::new(ReplayTransport::new(dir).unwrap()), settings())
}

fn training_file(dir: &std::path::Path) -> std::path::PathBuf {
    let path = dir.join("train.jsonl");
    let record = TrainingRecord {
        system_message: DEFAULT_SYSTEM_MESSAGE.into(),
        user_message: "Rewrite this.".into(),
        assistant_message: "Done.".into(),
        excerpt_id: None,
    };
    write_jsonl(&[record], &path).unwrap();
    path
}

#[test]
fn revision_batch_replays_in_order_without_network() {
    let fixtures = tempfile::tempdir().unwrap();
    let builder = ApiClient::new(Arc::new(ReplayTransport::new(fixtures.path()).unwrap()), settings());
    let texts: Vec<String> = (0..8).map(|i| format!("Original excerpt number {i}.")).collect();
    for (i, t) in texts.iter().enumerate() {
        let request = builder.revision_request(t, "plain-english", "ft:model").unwrap().to_http();
        write_fixture(fixtures.path(), &request, vec![RecordedResponse::json(200, chat_body(&format!("Plain {i}.")))])
            .unwrap();
    }
    let client = replay(fixtures.path());
    let results = client.revise_batch(&texts, "plain-english", "ft:model");
    let revised: Vec<String> = results.into_iter().map(Result::unwrap).collect();
    assert_eq!(revised, (0..8).map(|i| format!("Plain {i}.")).collect::<Vec<_>>());
    assert_eq!(network_calls(), 0);
}

#[test]
fn transient_errors_are_retried_from_the_fixture_sequence() {
    let fixtures = tempfile::tempdir().unwrap();
    let client = replay(fixtures.path());
    let request = client.revision_request("Text.", "plain-english", "m").unwrap();
    write_fixture(
        fixtures.path(),
        &request.to_http(),
        vec![RecordedResponse::json(503, json!({"error": {"message": "busy"}})), RecordedResponse::json(200, chat_body("Ok."))],
    )
    .unwrap();
    let client = replay(fixtures.path());
    let response = client.chat_complete(&request).unwrap();
    assert_eq!((response.content.as_str(), response.attempts), ("Ok.", 2));
}

#[test]
fn missing_fixture_is_reported() {
    let fixtures = tempfile::tempdir().unwrap();
    let err = replay(fixtures.path()).revise_text("Unseen.", "plain-english", "m").unwrap_err();
    assert!(matches!(err, LlmError::FixtureMiss { .. }), "{err}");
}

#[test]
fn fine_tune_lifecycle_replays_to_success() {
    let fixtures = tempfile::tempdir().unwrap();
    let train = training_file(fixtures.path());
    let contents = std::fs::read(&train).unwrap();
    write_fixture(fixtures.path(), &ApiClient::upload_request(&train, &contents),
        vec![RecordedResponse::json(200, json!({"id": "file-1", "purpose": "fine-tune"}))]).unwrap();
    write_fixture(fixtures.path(), &ApiClient::submit_request("file-1", "gpt-3.5-turbo", Some(3), None),
        vec![RecordedResponse::json(200, job_body("validating_files"))]).unwrap();
    write_fixture(fixtures.path(), &ApiClient::job_request("ftjob-1"), vec![
        RecordedResponse::json(200, job_body("queued")),
        RecordedResponse::json(200, job_body("running")),
        RecordedResponse::json(200, job_body("succeeded")),
    ]).unwrap();

    let client = replay(fixtures.path());
    let file_id = client.upload_training_file(&train).unwrap();
    let job = client.submit_finetune(&file_id, "gpt-3.5-turbo", Some(3), None).unwrap();
    assert_eq!(job.status, JobStatus::Queued);
    let done = client.poll_job("ftjob-1", Duration::from_millis(1), Duration::from_secs(5)).unwrap();
    assert_eq!(done.status, JobStatus::Succeeded);
    assert_eq!(done.fine_tuned_model.as_deref(), Some("ft:gpt-3.5-turbo:hazel"));
    assert_eq!(done.epochs, Some(3));
}

#[test]
fn failed_and_stuck_jobs() {
    let fixtures = tempfile::tempdir().unwrap();
    write_fixture(fixtures.path(), &ApiClient::job_request("ftjob-1"), vec![
        RecordedResponse::json(200, job_body("running")),
        RecordedResponse::json(200, job_body("failed")),
    ]).unwrap();
    write_fixture(fixtures.path(), &ApiClient::job_request("ftjob-2"), vec![RecordedResponse::json(200, job_body("running"))])
        .unwrap();
    let client = replay(fixtures.path());
    match client.poll_job("ftjob-1", Duration::from_millis(1), Duration::from_secs(5)) {
        Err(LlmError::JobFailed { message, .. }) => assert!(message.contains("too few")),
        other => panic!("{other:?}"),
    }
    match client.poll_job("ftjob-2", Duration::from_millis(20), Duration::from_millis(50)) {
        Err(LlmError::PollTimeout { status, .. }) => assert_eq!(status, JobStatus::Running),
        other => panic!("{other:?}"),
    }
}

#[test]
fn invalid_training_file_is_never_uploaded() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.jsonl");
    std::fs::write(&bad, "{\"messages\": [}\n").unwrap();
    match replay(dir.path()).upload_training_file(&bad) {
        Err(LlmError::ValidationRefused(report)) => assert!(!report.passed),
        other => panic!("{other:?}"),
    }
}

#[test]
fn live_transport_without_key_fails_before_sending() {
    let transport = LiveTransport::new("http://127.0.0.1:9", Duration::from_secs(1)).unwrap();
    let client = ApiClient::new(Arc::new(transport), ClientSettings { api_key: None, ..settings() });
    let err = client.revise_text("Text.", "plain-english", "m").unwrap_err();
    assert!(matches!(err, LlmError::Auth(_)), "{err}");
    assert_eq!(network_calls(), 0);
}
