"""
URL configuration for the logicpoly project.

The workbench app exposes read-only JSON views of construction runs.
"""
from django.contrib import admin
from django.urls import path, include

urlpatterns = [
    path('', include('workbench.urls')),
    path('admin/', admin.site.urls),
]
