"""Unit tests for Meta API endpoints."""

from fastapi import status


class TestMetaEndpoints:
    """Tests for meta information endpoints."""

    def test_health_check(self, client):
        """Test the health check endpoint."""
        response = client.get("/meta/health")

        assert response.status_code == status.HTTP_200_OK
        data = response.json()
        assert data["status"] == "healthy"
        assert "version" in data
        assert data["hbar_c"] == 197.3269804

    def test_defaults(self, client):
        """Test the defaults endpoint reports the nuclear parameters."""
        response = client.get("/meta/defaults")

        assert response.status_code == status.HTTP_200_OK
        data = response.json()
        assert data["r0"] == 1.285
        assert data["a"] == 0.65
        assert data["m0c2"] == 139.570
        assert data["oracle_domain"] == "physical"

    def test_process_time_header(self, client):
        """Test that responses carry the timing header."""
        response = client.get("/meta/health")

        assert "X-Process-Time" in response.headers
